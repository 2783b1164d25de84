#include "glflow/seeding.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "glflow/fft.hpp"
#include "glflow/reduce.hpp"
#include "glflow/vortex_profile.hpp"

namespace glflow {

namespace {

int wrap_i(int i, int n) { return ((i % n) + n) % n; }

// Circulation around the torus' noncontractible axis loops must be an
// integer multiple of 2*pi too, and a zero-mode-free solve does not
// guarantee that (a separated pair leaves a fractional deficit, e.g. -pi
// for separation L/2).  Adding a uniform increment per axis changes no cell
// circulation; snapping to the nearest multiple costs the least kinetic
// energy and restores the holonomy the configuration carries in the
// continuum.  All parallel loops differ by exact multiples of 2*pi, so one
// reference line per axis fixes every seam at once.
void snap_holonomies(const GridSpec& g, std::array<std::vector<double>, 3>& inc) {
  const int n1 = g.n[1], n2 = g.n[2];
  const std::size_t stride[3] = {static_cast<std::size_t>(n1) * n2,
                                 static_cast<std::size_t>(n2), 1};
  for (int a = 0; a < g.dim; ++a) {
    double H = 0.0;
    for (int m = 0; m < g.n[a]; ++m) H += inc[a][m * stride[a]];
    double corr =
        (2.0 * M_PI * std::lround(H / (2.0 * M_PI)) - H) / g.n[a];
    for (auto& e : inc[a]) e += corr;
  }
}

// Phase assembly: inc[a][idx] is the phase increment along the lattice edge
// from cell idx to its +a neighbour.  Walking a deterministic spanning tree
// (axis-0 chain through the origin, then axis-1 rows, then axis-2 pillars)
// pins theta at every cell.  The callers build increments whose circulation
// around any plaquette is an exact integer multiple of 2*pi, so exp(i theta)
// is smooth across the non-tree edges as well.
std::vector<double> accumulate_tree(
    const GridSpec& g, const std::array<std::vector<double>, 3>& inc) {
  const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
  std::vector<double> th(g.cells(), 0.0);
  auto at = [&](int i, int j, int k) {
    return (static_cast<std::size_t>(i) * n1 + j) * n2 + k;
  };
  for (int i = 1; i < n0; ++i)
    th[at(i, 0, 0)] = th[at(i - 1, 0, 0)] + inc[0][at(i - 1, 0, 0)];
  for (int i = 0; i < n0; ++i)
    for (int j = 1; j < n1; ++j)
      th[at(i, j, 0)] = th[at(i, j - 1, 0)] + inc[1][at(i, j - 1, 0)];
  if (g.dim == 3)
    for (int i = 0; i < n0; ++i)
      for (int j = 0; j < n1; ++j)
        for (int k = 1; k < n2; ++k)
          th[at(i, j, k)] = th[at(i, j, k - 1)] + inc[2][at(i, j, k - 1)];
  return th;
}

double to_unit(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

ComplexField seed_constant(const GridSpec& g, cplx value) {
  ComplexField f(g, value);
  return f;
}

ComplexField seed_plane_wave(const GridSpec& g, std::array<int, 3> mode) {
  ComplexField f(g);
  std::array<double, 3> k{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) k[a] = 2.0 * M_PI * mode[a] / g.length(a);
  parallel_for(g.cells(), worker_threads(), [&](std::size_t idx) {
    int i, j, kk;
    decode_index(g, idx, i, j, kk);
    double ph = k[0] * (i * g.h) + k[1] * (j * g.h) + k[2] * (kk * g.h);
    f.a[idx] = cplx(std::cos(ph), std::sin(ph));
  });
  return f;
}

ComplexField seed_vortex_configuration(const GridSpec& g,
                                       const std::vector<PointVortex>& vs,
                                       SeedReport* report) {
  if (g.dim != 2)
    throw std::invalid_argument(
        "seed_vortex_configuration: point vortices are 2-d data");
  if (vs.empty()) return seed_vacuum(g);
  long net = 0;
  for (const auto& v : vs) {
    if (v.degree == 0)
      throw std::invalid_argument(
          "seed_vortex_configuration: zero-degree entry");
    net += v.degree;
  }
  if (net != 0)
    throw std::invalid_argument(
        "seed_vortex_configuration: net degree " + std::to_string(net) +
        " != 0; a periodic torus only carries balanced configurations");
  const double L0 = g.length(0), L1 = g.length(1);
  for (std::size_t p = 0; p < vs.size(); ++p)
    for (std::size_t q = p + 1; q < vs.size(); ++q) {
      double dd = min_image_dist2(g, vs[p].pos.data(), vs[q].pos.data());
      if (dd < g.h * g.h)
        throw std::invalid_argument(
            "seed_vortex_configuration: cores " + std::to_string(p) + " and " +
            std::to_string(q) + " coincide (separation below h)");
      if (report && dd < 16.0 * g.epsilon * g.epsilon) {
        report->proximity_warning = true;
        report->notes.push_back("cores " + std::to_string(p) + "," +
                                std::to_string(q) +
                                " closer than 4 epsilon; clusters will merge");
      }
    }

  // Circulation deposits: the whole 2*pi*degree of each core is carried by
  // the one grid cell containing it.  Fractional per-cell circulations (for
  // instance from a smeared vorticity) cannot be realized by any
  // single-valued theta and would tear the field along branch seams, so
  // quantized deposits are the only faithful choice on a lattice.
  const int n0 = g.n[0], n1 = g.n[1];
  std::vector<cplx> q(g.cells(), cplx(0.0, 0.0));
  for (const auto& v : vs) {
    int ci = wrap_i(static_cast<int>(std::floor(v.pos[0] / g.h)), n0);
    int cj = wrap_i(static_cast<int>(std::floor(v.pos[1] / g.h)), n1);
    q[static_cast<std::size_t>(ci) * n1 + cj] += 2.0 * M_PI * v.degree;
  }

  // Cell-dual stream function with the exact 5-point symbol:
  //   psi(i+1,j) + psi(i-1,j) + psi(i,j+1) + psi(i,j-1) - 4 psi(i,j) = q(i,j)
  // so that the edge increments below reproduce q plaquette by plaquette
  // without truncation error (the balance check above makes the zero mode
  // droppable).
  const Spectral& sp = spectral_for(g);
  std::vector<cplx> qh(g.cells());
  sp.forward(q.data(), qh.data());
  for (std::size_t idx = 0; idx < g.cells(); ++idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    double s0 = std::sin(M_PI * i / n0), s1 = std::sin(M_PI * j / n1);
    double den = 4.0 * (s0 * s0 + s1 * s1);
    qh[idx] = (den > 0.0) ? -qh[idx] / den : cplx(0.0, 0.0);
  }
  std::vector<cplx> psi(g.cells());
  sp.inverse(qh.data(), psi.data());
  auto ps = [&](int i, int j) {
    return psi[static_cast<std::size_t>(wrap_i(i, n0)) * n1 + wrap_i(j, n1)]
        .real();
  };

  // Edge increments are transverse psi differences; summing the four around
  // cell (i,j) telescopes to the 5-point stencil, i.e. exactly q(i,j).
  std::array<std::vector<double>, 3> inc;
  inc[0].assign(g.cells(), 0.0);
  inc[1].assign(g.cells(), 0.0);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      std::size_t e = static_cast<std::size_t>(i) * n1 + j;
      inc[0][e] = -(ps(i, j) - ps(i, j - 1));
      inc[1][e] = ps(i, j) - ps(i - 1, j);
    }
  snap_holonomies(g, inc);
  std::vector<double> theta = accumulate_tree(g, inc);

  ComplexField f(g);
  parallel_for(g.cells(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    double x = i * g.h, y = j * g.h;
    double amp = 1.0;
    for (const auto& vtx : vs) {
      // The modulus dips at the centre of the depositing cell -- where the
      // phase singularity actually sits -- so |u| never vanishes on a grid
      // point and every plaquette winding stays well defined.
      double cx = (std::floor(vtx.pos[0] / g.h) + 0.5) * g.h;
      double cy = (std::floor(vtx.pos[1] / g.h) + 0.5) * g.h;
      double dx = min_image(x - cx, L0);
      double dy = min_image(y - cy, L1);
      amp *= vortex_profile(vtx.degree,
                            std::sqrt(dx * dx + dy * dy) / g.epsilon);
    }
    f.a[idx] = amp * cplx(std::cos(theta[idx]), std::sin(theta[idx]));
  });
  return f;
}

ComplexField seed_vortex_ring(const GridSpec& g, double R0,
                              std::array<double, 3> center) {
  if (g.dim != 3)
    throw std::invalid_argument("seed_vortex_ring: ring data is 3-d");
  if (!(R0 >= 6.0 * g.epsilon))
    throw std::invalid_argument(
        "seed_vortex_ring: radius " + std::to_string(R0) +
        " degenerate: need R0 >= 6 epsilon = " +
        std::to_string(6.0 * g.epsilon));
  if (!(2.0 * R0 <= g.min_length() - 8.0 * g.epsilon))
    throw std::invalid_argument(
        "seed_vortex_ring: ring diameter too close to the domain size");

  const double L0 = g.length(0), L1 = g.length(1), L2 = g.length(2);
  // The core circle lives in the mid-plane of the cell layer containing
  // center[2]: every grid point keeps |dz| >= h/2, so the modulus never
  // vanishes on a lattice site and all face windings stay well defined.
  const double zc = (std::floor(center[2] / g.h) + 0.5) * g.h;

  // Meridian-angle phase: in each half-plane through the axis, theta is the
  // polar angle about the core at (s, dz) = (0, 0), with s the signed
  // distance to the circle's cylinder.  The raw angle jumps by
  // 2*(pi - atan2(L2/2, |s|)) across the antipodal plane -- not a multiple
  // of 2*pi -- so the bare formula tears there.  The taper below closes that
  // gap smoothly over the outermost W of axial distance on each side.  The
  // compensating counter-circulation this spreads through the far slab is so
  // dilute that no face quantizes at t = 0 (the seeded field carries exactly
  // one closed filament); under evolution it condenses into the balancing
  // counter-rotating loop near the antipodal plane that any neutral periodic
  // configuration must hold.
  const double W = L2 / 8.0;
  ComplexField f(g);
  parallel_for(g.cells(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    double dx = min_image(i * g.h - center[0], L0);
    double dy = min_image(j * g.h - center[1], L1);
    double dz = min_image(k * g.h - zc, L2);
    double s = std::hypot(dx, dy) - R0;
    double rho = std::hypot(s, dz);
    double amp = vortex_profile(1, rho / g.epsilon);
    double th = std::atan2(dz, s);
    double az = std::abs(dz);
    if (az > 0.5 * L2 - W) {
      double x = (az - (0.5 * L2 - W)) / W;
      double ramp = x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
      th -= std::copysign(std::atan2(0.5 * L2, s), dz) * ramp;
    }
    f.a[idx] = amp * cplx(std::cos(th), std::sin(th));
  });
  return f;
}

ComplexField seed_random_phase(const GridSpec& g, double amplitude,
                               double corr_len, int mode_cap,
                               std::uint64_t seed) {
  if (mode_cap < 1)
    throw std::invalid_argument("seed_random_phase: mode_cap must be >= 1");
  std::mt19937_64 rng(seed);
  struct Mode {
    std::array<double, 3> k;
    double amp;
    double shift;
  };
  std::vector<Mode> modes;
  const int nmodes = 32;
  for (int m = 0; m < nmodes; ++m) {
    std::array<int, 3> mm{0, 0, 0};
    bool zero = true;
    for (int a = 0; a < g.dim; ++a) {
      // uniform integer in [-mode_cap, mode_cap]
      mm[a] = static_cast<int>(rng() % (2 * mode_cap + 1)) - mode_cap;
      if (mm[a] != 0) zero = false;
    }
    if (zero) {
      --m;
      continue;
    }
    Mode md;
    double k2 = 0;
    for (int a = 0; a < 3; ++a) {
      md.k[a] = (a < g.dim) ? 2.0 * M_PI * mm[a] / g.length(a) : 0.0;
      k2 += md.k[a] * md.k[a];
    }
    // Box-Muller with explicit bit-derived uniforms (implementation-defined
    // distributions are avoided for cross-platform determinism).
    double u1 = to_unit(rng()), u2 = to_unit(rng());
    double gauss =
        std::sqrt(-2.0 * std::log(u1 + 1e-300)) * std::cos(2.0 * M_PI * u2);
    md.amp = gauss * std::exp(-k2 * corr_len * corr_len / 4.0);
    md.shift = 2.0 * M_PI * to_unit(rng());
    modes.push_back(md);
  }

  std::vector<double> phi(g.cells(), 0.0);
  parallel_for(g.cells(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    double x = i * g.h, y = j * g.h, z = k * g.h;
    double s = 0;
    for (const auto& md : modes)
      s += md.amp * std::cos(md.k[0] * x + md.k[1] * y + md.k[2] * z + md.shift);
    phi[idx] = s;
  });
  double ms = pairwise_sum_indexed(g.cells(),
                                   [&](std::size_t i) { return phi[i] * phi[i]; }) /
              static_cast<double>(g.cells());
  double scale = ms > 0 ? amplitude / std::sqrt(ms) : 0.0;
  ComplexField f(g);
  parallel_for(g.cells(), worker_threads(), [&](std::size_t i) {
    double p = scale * phi[i];
    f.a[i] = cplx(std::cos(p), std::sin(p));
  });
  return f;
}

ComplexField make_isolated_vortex(const GridSpec& g,
                                  std::array<double, 2> center, int degree) {
  if (g.dim != 2)
    throw std::invalid_argument("make_isolated_vortex: 2-d fixture");
  ComplexField f(g);
  const double L0 = g.length(0), L1 = g.length(1);
  parallel_for(g.cells(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    double dx = min_image(i * g.h - center[0], L0);
    double dy = min_image(j * g.h - center[1], L1);
    double r = std::sqrt(dx * dx + dy * dy);
    double amp = vortex_profile(degree, r / g.epsilon);
    double th = degree * std::atan2(dy, dx);
    f.a[idx] = amp * cplx(std::cos(th), std::sin(th));
  });
  return f;
}

}  // namespace glflow
