#include "glflow/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glflow/fft.hpp"
#include "glflow/reduce.hpp"

namespace glflow {

namespace {

void reaction(const ComplexField& u, std::vector<cplx>& f) {
  const double inv_e2 = 1.0 / (u.grid.epsilon * u.grid.epsilon);
  f.resize(u.size());
  parallel_for(u.size(), worker_threads(), [&](std::size_t i) {
    cplx z = u.a[i];
    f[i] = z * ((1.0 - std::norm(z)) * inv_e2);
  });
}

void fd_laplacian(const ComplexField& u, std::vector<cplx>& out) {
  const GridSpec& g = u.grid;
  out.resize(u.size());
  const double ih2 = 1.0 / (g.h * g.h);
  const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
  parallel_for(u.size(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    auto at = [&](int a, int b, int c) {
      a += (a < 0) ? n0 : (a >= n0 ? -n0 : 0);
      b += (b < 0) ? n1 : (b >= n1 ? -n1 : 0);
      c += (c < 0) ? n2 : (c >= n2 ? -n2 : 0);
      return u.a[(static_cast<std::size_t>(a) * n1 + b) * n2 + c];
    };
    cplx s = u.at(i, j, k) * (-2.0 * g.dim);
    s += at(i - 1, j, k) + at(i + 1, j, k);
    s += at(i, j - 1, k) + at(i, j + 1, k);
    if (g.dim == 3) s += at(i, j, k - 1) + at(i, j, k + 1);
    out[idx] = s * ih2;
  });
}

struct SpectralState {
  const Spectral* sp;
  std::vector<cplx> uhat, fhat, work, work2;
};

void spectral_step(ComplexField& u, SpectralState& st, double dt, int order) {
  const std::size_t n = u.size();
  reaction(u, st.work);
  st.fhat.resize(n);
  st.sp->forward(st.work.data(), st.fhat.data());
  if (order == 1) {
    parallel_for(n, worker_threads(), [&](std::size_t i) {
      st.uhat[i] += dt * st.fhat[i];
    });
    st.sp->apply_heat_decay(st.uhat.data(), dt);
    st.sp->inverse(st.uhat.data(), u.a.data());
    return;
  }
  // Heun on the integrating-factor system: predict, re-evaluate, average.
  st.work2.resize(n);
  parallel_for(n, worker_threads(), [&](std::size_t i) {
    st.work2[i] = st.uhat[i] + dt * st.fhat[i];
  });
  st.sp->apply_heat_decay(st.work2.data(), dt);
  ComplexField upred(u.grid);
  st.sp->inverse(st.work2.data(), upred.a.data());
  reaction(upred, st.work);
  std::vector<cplx> ghat(n);
  st.sp->forward(st.work.data(), ghat.data());
  parallel_for(n, worker_threads(), [&](std::size_t i) {
    st.uhat[i] += 0.5 * dt * st.fhat[i];
  });
  st.sp->apply_heat_decay(st.uhat.data(), dt);
  parallel_for(n, worker_threads(), [&](std::size_t i) {
    st.uhat[i] += 0.5 * dt * ghat[i];
  });
  st.sp->inverse(st.uhat.data(), u.a.data());
}

void fd_step(ComplexField& u, std::vector<cplx>& lap, std::vector<cplx>& f,
             double dt) {
  fd_laplacian(u, lap);
  reaction(u, f);
  parallel_for(u.size(), worker_threads(), [&](std::size_t i) {
    u.a[i] += dt * (lap[i] + f[i]);
  });
}

}  // namespace

double stability_limit(const GridSpec& g, Scheme scheme) {
  double de = g.epsilon * g.epsilon / 4.0;
  if (scheme == Scheme::kSpectralIF) return de;
  return std::min(g.h * g.h / (2.0 * g.dim), de);
}

ComplexField pde_rhs(const ComplexField& u) {
  ComplexField out(u.grid);
  out.t = u.t;
  spectral_for(u.grid).laplacian(u, out);
  const double inv_e2 = 1.0 / (u.grid.epsilon * u.grid.epsilon);
  parallel_for(u.size(), worker_threads(), [&](std::size_t i) {
    cplx z = u.a[i];
    out.a[i] += z * ((1.0 - std::norm(z)) * inv_e2);
  });
  return out;
}

void evolve_to(ComplexField& u, double t_end, const StepperConfig& cfg,
               const std::vector<double>& stops, const StopCallback& on_stop) {
  if (t_end < u.t - 1e-15)
    throw std::invalid_argument("evolve_to: t_end precedes the field time");
  const double limit = stability_limit(u.grid, cfg.scheme);
  double dt = cfg.dt > 0 ? cfg.dt : limit;
  if (dt > limit * (1.0 + 1e-12))
    throw std::invalid_argument(
        "evolve_to: dt = " + std::to_string(dt) +
        " violates the stability bound " + std::to_string(limit) +
        (cfg.scheme == Scheme::kSpectralIF ? " (eps^2/4)"
                                           : " (min(h^2/2d, eps^2/4))"));
  if (cfg.scheme == Scheme::kExplicitFD && cfg.order != 1)
    throw std::invalid_argument("evolve_to: the FD oracle is first order");
  if (cfg.order != 1 && cfg.order != 2)
    throw std::invalid_argument("evolve_to: order must be 1 or 2");

  std::vector<double> agenda;
  for (double s : stops)
    if (s > u.t + 1e-15 && s <= t_end + 1e-15) agenda.push_back(s);
  std::sort(agenda.begin(), agenda.end());
  agenda.push_back(t_end);

  SpectralState st;
  std::vector<cplx> lap, f;
  if (cfg.scheme == Scheme::kSpectralIF) {
    st.sp = &spectral_for(u.grid);
    st.uhat.resize(u.size());
    st.sp->forward(u.a.data(), st.uhat.data());
  }

  for (double target : agenda) {
    while (u.t < target - 1e-15) {
      double step_dt = std::min(dt, target - u.t);
      if (cfg.scheme == Scheme::kSpectralIF)
        spectral_step(u, st, step_dt, cfg.order);
      else
        fd_step(u, lap, f, step_dt);
      u.t = (target - u.t <= dt * (1.0 + 1e-12)) ? target : u.t + step_dt;
    }
    u.t = target;
    if (on_stop) on_stop(u, pde_rhs(u));
  }
}

double sup_mod(const ComplexField& u) {
  double m = 0.0;
  for (const cplx& z : u.a) m = std::max(m, std::norm(z));
  return std::sqrt(m);
}

SupersolutionCheck supersolution_check(double sup_mod0,
                                       const ComplexField& u) {
  double M = std::max(1.0, sup_mod0);
  double bound = 0.0;
  if (M > 1.0) {
    double t0 = 2.0 * std::log(1.0 - 1.0 / (M * M));
    double s = u.t / (u.grid.epsilon * u.grid.epsilon);
    double q = std::exp(-0.5 * (s - t0));
    bound = q / (1.0 - q);
  }
  double measured = -1.0;
  for (const cplx& z : u.a) measured = std::max(measured, std::norm(z) - 1.0);
  SupersolutionCheck c{};
  c.bound = bound;
  c.measured = measured;
  c.margin = bound - measured;
  c.pass = measured <= bound + 1e-3;
  return c;
}

}  // namespace glflow
