#include "glflow/phase.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include "glflow/fft.hpp"
#include "glflow/quadrature.hpp"
#include "glflow/reduce.hpp"

namespace glflow {

namespace {

// Wavenumber components (Nyquist-zeroed, matching the derivative stencil)
// for a flat index.
void kvec(const GridSpec& g, const Spectral& sp, std::size_t idx, double* k) {
  int i, j, kk;
  decode_index(g, idx, i, j, kk);
  k[0] = sp.k_deriv(0)[i];
  k[1] = sp.k_deriv(1)[j];
  k[2] = (g.dim == 3) ? sp.k_deriv(2)[kk] : 0.0;
}

std::size_t wrapped_neighbor(const GridSpec& g, std::size_t idx, int axis,
                             int step) {
  int c[3];
  decode_index(g, idx, c[0], c[1], c[2]);
  c[axis] += step;
  if (c[axis] < 0) c[axis] += g.n[axis];
  if (c[axis] >= g.n[axis]) c[axis] -= g.n[axis];
  return (static_cast<std::size_t>(c[0]) * g.n[1] + c[1]) * g.n[2] + c[2];
}

std::string cell_name(const GridSpec& g, std::size_t idx) {
  int i, j, k;
  decode_index(g, idx, i, j, k);
  std::string s = "(" + std::to_string(i) + "," + std::to_string(j);
  if (g.dim == 3) s += "," + std::to_string(k);
  return s + ")";
}

}  // namespace

HodgeParts hodge_decompose(const ComplexField& u) {
  const GridSpec& g = u.grid;
  const Spectral& sp = spectral_for(g);
  const std::size_t nc = g.cells();
  const int d = g.dim;

  std::array<ComplexField, 3> grad;
  sp.gradient(u, grad);
  std::array<std::vector<cplx>, 3> jhat;
  std::array<std::vector<double>, 3> j;
  for (int a = 0; a < d; ++a) {
    j[a].resize(nc);
    std::vector<cplx> packed(nc);
    parallel_for(nc, worker_threads(), [&](std::size_t i) {
      double v = std::imag(std::conj(u.a[i]) * grad[a].a[i]);
      j[a][i] = v;
      packed[i] = v;
    });
    jhat[a].resize(nc);
    sp.forward(packed.data(), jhat[a].data());
  }

  HodgeParts out;
  for (int a = 0; a < d; ++a) out.c[a] = jhat[a][0].real() / double(nc);

  const cplx I(0.0, 1.0);

  // Potential part: phi solves laplacian(phi) = div j, mean zero.
  std::vector<cplx> phihat(nc);
  parallel_for(nc, worker_threads(), [&](std::size_t idx) {
    double k[3];
    kvec(g, sp, idx, k);
    double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) {
      phihat[idx] = 0.0;
      return;
    }
    cplx div = I * (k[0] * jhat[0][idx] + k[1] * jhat[1][idx]);
    if (d == 3) div += I * k[2] * jhat[2][idx];
    phihat[idx] = div / (-k2);
  });
  std::vector<cplx> tmp(nc), back(nc);
  sp.inverse(phihat.data(), back.data());
  out.phi.resize(nc);
  for (std::size_t i = 0; i < nc; ++i) out.phi[i] = back[i].real();
  for (int a = 0; a < d; ++a) {
    parallel_for(nc, worker_threads(), [&](std::size_t idx) {
      double k[3];
      kvec(g, sp, idx, k);
      tmp[idx] = I * k[a] * phihat[idx];
    });
    sp.inverse(tmp.data(), back.data());
    out.grad_phi[a].resize(nc);
    for (std::size_t i = 0; i < nc; ++i) out.grad_phi[a][i] = back[i].real();
  }

  // Divergence-free part, rebuilt through a potential so the residual below
  // genuinely tests the decomposition.
  if (d == 2) {
    std::vector<cplx> psihat(nc);
    parallel_for(nc, worker_threads(), [&](std::size_t idx) {
      double k[3];
      kvec(g, sp, idx, k);
      double k2 = k[0] * k[0] + k[1] * k[1];
      psihat[idx] = (k2 == 0.0)
                        ? cplx(0.0)
                        : (I * (k[0] * jhat[1][idx] - k[1] * jhat[0][idx])) /
                              (-k2);
    });
    sp.inverse(psihat.data(), back.data());
    out.psi.resize(nc);
    for (std::size_t i = 0; i < nc; ++i) out.psi[i] = back[i].real();
    // sol = (-d_y psi, d_x psi)
    for (int a = 0; a < 2; ++a) {
      parallel_for(nc, worker_threads(), [&](std::size_t idx) {
        double k[3];
        kvec(g, sp, idx, k);
        tmp[idx] = (a == 0 ? -I * k[1] : I * k[0]) * psihat[idx];
      });
      sp.inverse(tmp.data(), back.data());
      out.sol[a].resize(nc);
      for (std::size_t i = 0; i < nc; ++i) out.sol[a][i] = back[i].real();
    }
  } else {
    // -laplacian(A) = curl j, sol = curl A.
    std::array<std::vector<cplx>, 3> Ahat;
    for (int a = 0; a < 3; ++a) Ahat[a].resize(nc);
    parallel_for(nc, worker_threads(), [&](std::size_t idx) {
      double k[3];
      kvec(g, sp, idx, k);
      double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      if (k2 == 0.0) {
        Ahat[0][idx] = Ahat[1][idx] = Ahat[2][idx] = 0.0;
        return;
      }
      cplx cj0 = I * (k[1] * jhat[2][idx] - k[2] * jhat[1][idx]);
      cplx cj1 = I * (k[2] * jhat[0][idx] - k[0] * jhat[2][idx]);
      cplx cj2 = I * (k[0] * jhat[1][idx] - k[1] * jhat[0][idx]);
      Ahat[0][idx] = cj0 / k2;
      Ahat[1][idx] = cj1 / k2;
      Ahat[2][idx] = cj2 / k2;
    });
    for (int a = 0; a < 3; ++a) {
      int b = (a + 1) % 3, c = (a + 2) % 3;
      parallel_for(nc, worker_threads(), [&](std::size_t idx) {
        double k[3];
        kvec(g, sp, idx, k);
        tmp[idx] = I * (k[b] * Ahat[c][idx] - k[c] * Ahat[b][idx]);
      });
      sp.inverse(tmp.data(), back.data());
      out.sol[a].resize(nc);
      for (std::size_t i = 0; i < nc; ++i) out.sol[a][i] = back[i].real();
    }
  }

  double res = 0.0;
  for (int a = 0; a < d; ++a)
    for (std::size_t i = 0; i < nc; ++i)
      res = std::max(res, std::abs(j[a][i] - out.grad_phi[a][i] -
                                   out.sol[a][i] - out.c[a]));
  out.residual = res;
  return out;
}

PhaseSplit extract_heat_phase(const ComplexField& u, double t_heat,
                              double mod_threshold,
                              const std::vector<std::uint8_t>* region_mask) {
  const GridSpec& g = u.grid;
  const std::size_t nc = g.cells();
  const int d = g.dim;
  if (t_heat < 0)
    throw std::invalid_argument("extract_heat_phase: t_heat must be >= 0");
  if (region_mask && region_mask->size() != nc)
    throw std::invalid_argument(
        "extract_heat_phase: region mask size does not match the grid");

  std::vector<std::uint8_t> region(nc);
  if (region_mask) {
    region = *region_mask;
  } else {
    double t2 = mod_threshold * mod_threshold;
    for (std::size_t i = 0; i < nc; ++i)
      region[i] = std::norm(u.a[i]) >= t2 ? 1 : 0;
  }
  std::size_t seed = nc;
  for (std::size_t i = 0; i < nc; ++i)
    if (region[i]) {
      seed = i;
      break;
    }
  if (seed == nc)
    throw std::invalid_argument(
        "extract_heat_phase: no cell clears the modulus threshold");

  // Cycle windings along the torus directions, measured on the grid lines
  // through the seed (skipped when the line leaves the region).
  PhaseSplit ps;
  ps.t_heat = t_heat;
  int sc[3];
  decode_index(g, seed, sc[0], sc[1], sc[2]);
  for (int a = 0; a < d; ++a) {
    double acc = 0.0;
    bool ok = true;
    std::size_t cur = seed;
    for (int m = 0; m < g.n[a]; ++m) {
      std::size_t nxt = wrapped_neighbor(g, cur, a, +1);
      if (!region[cur] || !region[nxt]) {
        ok = false;
        break;
      }
      acc += std::arg(u.a[nxt] * std::conj(u.a[cur]));
      cur = nxt;
    }
    if (ok) ps.winding[a] = static_cast<int>(std::lround(acc / (2.0 * M_PI)));
  }

  // Strip the linear winding part before unwrapping.
  std::vector<cplx> v(u.a);
  if (ps.winding[0] || ps.winding[1] || ps.winding[2]) {
    parallel_for(nc, worker_threads(), [&](std::size_t idx) {
      int i, j, k;
      decode_index(g, idx, i, j, k);
      double lin = 2.0 * M_PI *
                   (ps.winding[0] * double(i) / g.n[0] +
                    ps.winding[1] * double(j) / g.n[1] +
                    ps.winding[2] * double(k) / g.n[2]);
      v[idx] *= std::polar(1.0, -lin);
    });
  }

  std::vector<double> theta(nc, 0.0);
  std::vector<std::uint8_t> assigned(nc, 0);
  std::queue<std::size_t> q;
  theta[seed] = std::arg(v[seed]);
  assigned[seed] = 1;
  q.push(seed);
  while (!q.empty()) {
    std::size_t cur = q.front();
    q.pop();
    for (int a = 0; a < d; ++a)
      for (int s : {+1, -1}) {
        std::size_t nb = wrapped_neighbor(g, cur, a, s);
        if (!region[nb] || assigned[nb]) continue;
        theta[nb] = theta[cur] + std::arg(v[nb] * std::conj(v[cur]));
        assigned[nb] = 1;
        q.push(nb);
      }
  }

  // Every edge internal to the region must agree with the tree values; a
  // mismatch (always close to a multiple of 2 pi) means the region encloses
  // a zero and the phase has no single-valued lift.
  std::size_t bad = 0;
  std::string offenders;
  for (std::size_t idx = 0; idx < nc; ++idx) {
    if (!region[idx] || !assigned[idx]) continue;
    for (int a = 0; a < d; ++a) {
      std::size_t nb = wrapped_neighbor(g, idx, a, +1);
      if (!region[nb] || !assigned[nb]) continue;
      double delta =
          theta[nb] - theta[idx] - std::arg(v[nb] * std::conj(v[idx]));
      if (std::abs(delta) > 1.0) {
        if (bad < 8) offenders += (bad ? ", " : "") + cell_name(g, idx);
        ++bad;
      }
    }
  }
  if (bad)
    throw std::runtime_error(
        "extract_heat_phase: phase is not single-valued on the region (" +
        std::to_string(bad) + " inconsistent edges; near " + offenders + ")");

  // Disconnected region components never got values; treat them like holes.
  // Fill holes harmonically: seed by nearest assigned value, then relax.
  std::size_t holes = 0;
  {
    std::queue<std::size_t> front;
    for (std::size_t i = 0; i < nc; ++i)
      if (assigned[i]) front.push(i);
    std::vector<std::uint8_t> filled(assigned);
    while (!front.empty()) {
      std::size_t cur = front.front();
      front.pop();
      for (int a = 0; a < d; ++a)
        for (int s : {+1, -1}) {
          std::size_t nb = wrapped_neighbor(g, cur, a, s);
          if (filled[nb]) continue;
          theta[nb] = theta[cur];
          filled[nb] = 1;
          ++holes;
          front.push(nb);
        }
    }
    if (holes) {
      double scale = 1.0;
      for (std::size_t i = 0; i < nc; ++i)
        scale = std::max(scale, std::abs(theta[i]));
      for (int sweep = 0; sweep < 20000; ++sweep) {
        double worst = 0.0;
        for (std::size_t idx = 0; idx < nc; ++idx) {
          if (assigned[idx]) continue;
          double s = 0.0;
          for (int a = 0; a < d; ++a)
            s += theta[wrapped_neighbor(g, idx, a, +1)] +
                 theta[wrapped_neighbor(g, idx, a, -1)];
          s /= 2.0 * d;
          worst = std::max(worst, std::abs(s - theta[idx]));
          theta[idx] = s;
        }
        if (worst < 1e-12 * scale) break;
      }
    }
  }

  if (t_heat > 0) {
    const Spectral& sp = spectral_for(g);
    std::vector<cplx> packed(nc), hat(nc);
    for (std::size_t i = 0; i < nc; ++i) packed[i] = theta[i];
    sp.forward(packed.data(), hat.data());
    sp.apply_heat_decay(hat.data(), t_heat);
    sp.inverse(hat.data(), packed.data());
    for (std::size_t i = 0; i < nc; ++i) theta[i] = packed[i].real();
  }
  ps.phi = std::move(theta);
  return ps;
}

std::array<std::vector<double>, 3> heat_phase_gradient(const GridSpec& g,
                                                       const PhaseSplit& ps) {
  const Spectral& sp = spectral_for(g);
  const std::size_t nc = g.cells();
  ComplexField packed(g);
  for (std::size_t i = 0; i < nc; ++i) packed.a[i] = ps.phi[i];
  std::array<ComplexField, 3> grad;
  sp.gradient(packed, grad);
  std::array<std::vector<double>, 3> out;
  for (int a = 0; a < g.dim; ++a) {
    double lin = 2.0 * M_PI * ps.winding[a] / g.length(a);
    out[a].resize(nc);
    for (std::size_t i = 0; i < nc; ++i)
      out[a][i] = grad[a].a[i].real() + lin;
  }
  return out;
}

std::vector<double> kappa_density(const ComplexField& u, const PhaseSplit& ps,
                                  GradientMode mode) {
  std::vector<double> e = energy_density(u, mode);
  auto gp = heat_phase_gradient(u.grid, ps);
  parallel_for(e.size(), worker_threads(), [&](std::size_t i) {
    double s = gp[0][i] * gp[0][i] + gp[1][i] * gp[1][i];
    if (u.grid.dim == 3) s += gp[2][i] * gp[2][i];
    e[i] -= 0.5 * s;
  });
  return e;
}

double kappa_l1_ratio(const ComplexField& u, const PhaseSplit& ps,
                      GradientMode mode) {
  std::vector<double> kap = kappa_density(u, ps, mode);
  std::vector<double> e = energy_density(u, mode);
  double num = pairwise_sum_indexed(kap.size(),
                                    [&](std::size_t i) { return std::abs(kap[i]); });
  double den = pairwise_sum(e);
  return den > 0 ? num / den : 0.0;
}

double kappa_sup_ratio(const ComplexField& u, const PhaseSplit& ps,
                       GradientMode mode) {
  std::vector<double> kap = kappa_density(u, ps, mode);
  std::vector<double> e = energy_density(u, mode);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < kap.size(); ++i) {
    num = std::max(num, std::abs(kap[i]));
    den = std::max(den, e[i]);
  }
  return den > 0 ? num / den : 0.0;
}

ModulusAsymptotics modulus_asymptotics(const ComplexField& u,
                                       const PhaseSplit& ps) {
  auto gp = heat_phase_gradient(u.grid, ps);
  const double e2 = u.grid.epsilon * u.grid.epsilon;
  ModulusAsymptotics m;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double s = gp[0][i] * gp[0][i] + gp[1][i] * gp[1][i];
    if (u.grid.dim == 3) s += gp[2][i] * gp[2][i];
    m.scale = std::max(m.scale, e2 * s);
    m.max_defect =
        std::max(m.max_defect, std::abs((1.0 - std::norm(u.a[i])) - e2 * s));
  }
  return m;
}

}  // namespace glflow
