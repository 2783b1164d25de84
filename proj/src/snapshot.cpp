#include "glflow/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace glflow {

namespace {

constexpr char kMagic[8] = {'G', 'L', 'F', 'L', 'O', 'W', '0', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& s, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& s, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  put_u64(s, v);
}

struct Reader {
  const std::string& s;
  std::size_t off;
  void need(std::size_t n, const char* what) const {
    if (off + n > s.size())
      throw std::runtime_error(std::string("snapshot: truncated while reading ") +
                               what);
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + i]))
           << (8 * i);
    off += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[off + i]))
           << (8 * i);
    off += 8;
    return v;
  }
  double f64(const char* what) {
    std::uint64_t v = u64(what);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
  }
  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(s[off++]);
  }
};

}  // namespace

std::string snapshot_bytes(const ComplexField& f) {
  std::string s;
  s.reserve(64 + 16 * f.size());
  s.append(kMagic, 8);
  put_u32(s, kVersion);
  s.push_back(static_cast<char>(f.grid.dim));
  for (int a = 0; a < f.grid.dim; ++a)
    put_u64(s, static_cast<std::uint64_t>(f.grid.n[a]));
  put_f64(s, f.grid.h);
  put_f64(s, f.grid.epsilon);
  put_f64(s, f.t);
  s.push_back(0);  // precision: f64 pairs
  for (const cplx& z : f.a) {
    put_f64(s, z.real());
    put_f64(s, z.imag());
  }
  return s;
}

ComplexField snapshot_from_bytes(const std::string& bytes, std::size_t* off_io) {
  Reader r{bytes, off_io ? *off_io : 0};
  r.need(8, "magic");
  if (std::memcmp(bytes.data() + r.off, kMagic, 8) != 0)
    throw std::runtime_error("snapshot: bad magic (not a GLFLOW01 stream)");
  r.off += 8;
  std::uint32_t ver = r.u32("version");
  if (ver != kVersion)
    throw std::runtime_error("snapshot: unsupported version " +
                             std::to_string(ver) + " (this build reads " +
                             std::to_string(kVersion) + ")");
  int dim = r.u8("dim");
  if (dim != 2 && dim != 3)
    throw std::runtime_error("snapshot: dim " + std::to_string(dim) +
                             " out of range");
  std::array<int, 3> n{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    std::uint64_t v = r.u64("cells");
    if (v < 8 || v > (1u << 24))
      throw std::runtime_error("snapshot: implausible axis extent " +
                               std::to_string(v));
    n[a] = static_cast<int>(v);
  }
  double h = r.f64("h");
  double eps = r.f64("epsilon");
  double t = r.f64("t");
  int prec = r.u8("precision");
  if (prec != 0)
    throw std::runtime_error("snapshot: unsupported precision flag " +
                             std::to_string(prec));
  GridSpec g = make_grid(dim, n, h, eps);
  ComplexField f(g);
  f.t = t;
  r.need(16 * f.size(), "payload");
  for (std::size_t i = 0; i < f.size(); ++i) {
    double re = r.f64("payload");
    double im = r.f64("payload");
    f.a[i] = cplx(re, im);
  }
  if (off_io) *off_io = r.off;
  return f;
}

void write_snapshot(const std::string& path, const ComplexField& f) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("snapshot: cannot open " + path + " for writing");
  std::string s = snapshot_bytes(f);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
  if (!out) throw std::runtime_error("snapshot: short write to " + path);
}

ComplexField read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("snapshot: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  std::size_t off = 0;
  ComplexField f = snapshot_from_bytes(bytes, &off);
  if (off != bytes.size())
    throw std::runtime_error("snapshot: trailing bytes after payload in " +
                             path);
  return f;
}

}  // namespace glflow
