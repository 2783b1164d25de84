#include "glflow/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "glflow/snapshot.hpp"

namespace glflow {

namespace {

constexpr char kMagic[8] = {'G', 'L', 'C', 'K', 'P', 'T', '0', '1'};

void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(char((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(char((v >> (8 * i)) & 0xff));
}
std::uint32_t get_u32(const std::string& b, std::size_t& off) {
  if (off + 4 > b.size())
    throw std::runtime_error("checkpoint: truncated header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= std::uint32_t(static_cast<unsigned char>(b[off + i])) << (8 * i);
  off += 4;
  return v;
}
std::uint64_t get_u64(const std::string& b, std::size_t& off) {
  if (off + 8 > b.size())
    throw std::runtime_error("checkpoint: truncated header");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= std::uint64_t(static_cast<unsigned char>(b[off + i])) << (8 * i);
  off += 8;
  return v;
}

}  // namespace

void write_checkpoint(const std::string& path, const Checkpoint& c) {
  std::string blob = snapshot_bytes(c.field);
  std::string b;
  b.append(kMagic, 8);
  put_u32(b, 1);
  put_u64(b, c.config_hash);
  put_u64(b, c.next_stop);
  put_u64(b, c.report_offset);
  put_u64(b, blob.size());
  b += blob;
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
  f.write(b.data(), static_cast<std::streamsize>(b.size()));
  if (!f) throw std::runtime_error("checkpoint: write failed");
}

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
  std::string b((std::istreambuf_iterator<char>(f)),
                std::istreambuf_iterator<char>());
  if (b.size() < 8 || std::memcmp(b.data(), kMagic, 8) != 0)
    throw std::runtime_error("checkpoint: bad magic in '" + path + "'");
  std::size_t off = 8;
  std::uint32_t version = get_u32(b, off);
  if (version != 1)
    throw std::runtime_error("checkpoint: unknown version " +
                             std::to_string(version));
  Checkpoint c;
  c.config_hash = get_u64(b, off);
  c.next_stop = get_u64(b, off);
  c.report_offset = get_u64(b, off);
  std::uint64_t blob_len = get_u64(b, off);
  if (off + blob_len != b.size())
    throw std::runtime_error("checkpoint: length mismatch in '" + path + "'");
  std::size_t field_off = off;
  c.field = snapshot_from_bytes(b, &field_off);
  if (field_off != b.size())
    throw std::runtime_error("checkpoint: trailing bytes in '" + path + "'");
  return c;
}

}  // namespace glflow
