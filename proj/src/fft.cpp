#include "glflow/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "glflow/reduce.hpp"

namespace glflow {

namespace {
fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }
const fftw_complex* as_fftw(const cplx* p) {
  return reinterpret_cast<const fftw_complex*>(p);
}
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Spectral::Spectral(const GridSpec& g) : g_(g) {
  const std::size_t nc = g_.cells();
  std::vector<cplx> scratch_in(nc), scratch_out(nc);
  {
    // FFTW planning is not thread-safe even with FFTW_ESTIMATE.
    std::lock_guard<std::mutex> lock(plan_mutex());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (g_.dim == 2) {
      plan_fwd_ = fftw_plan_dft_2d(g_.n[0], g_.n[1], as_fftw(scratch_in.data()),
                                   as_fftw(scratch_out.data()), FFTW_FORWARD,
                                   flags);
      plan_inv_ = fftw_plan_dft_2d(g_.n[0], g_.n[1], as_fftw(scratch_in.data()),
                                   as_fftw(scratch_out.data()), FFTW_BACKWARD,
                                   flags);
    } else {
      plan_fwd_ = fftw_plan_dft_3d(g_.n[0], g_.n[1], g_.n[2],
                                   as_fftw(scratch_in.data()),
                                   as_fftw(scratch_out.data()), FFTW_FORWARD,
                                   flags);
      plan_inv_ = fftw_plan_dft_3d(g_.n[0], g_.n[1], g_.n[2],
                                   as_fftw(scratch_in.data()),
                                   as_fftw(scratch_out.data()), FFTW_BACKWARD,
                                   flags);
    }
  }

  for (int a = 0; a < 3; ++a) {
    const int n = g_.n[a];
    kd_[a].assign(n, 0.0);
    if (a >= g_.dim) continue;
    const double dk = 2.0 * M_PI / g_.length(a);
    for (int m = 0; m < n; ++m) {
      int s = (m <= n / 2) ? m : m - n;
      kd_[a][m] = (m == n / 2) ? 0.0 : dk * s;
    }
  }

  k2_.assign(nc, 0.0);
  std::array<std::vector<double>, 3> kfull;
  for (int a = 0; a < g_.dim; ++a) {
    const int n = g_.n[a];
    const double dk = 2.0 * M_PI / g_.length(a);
    kfull[a].assign(n, 0.0);
    for (int m = 0; m < n; ++m) {
      int s = (m <= n / 2) ? m : m - n;
      if (m == n / 2) s = n / 2;  // Nyquist keeps full magnitude in |k|^2
      kfull[a][m] = dk * s;
    }
  }
  for (std::size_t idx = 0; idx < nc; ++idx) {
    int i, j, k;
    decode_index(g_, idx, i, j, k);
    double s = kfull[0][i] * kfull[0][i] + kfull[1][j] * kfull[1][j];
    if (g_.dim == 3) s += kfull[2][k] * kfull[2][k];
    k2_[idx] = s;
  }
}

Spectral::~Spectral() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  if (plan_fwd_) fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  if (plan_inv_) fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void Spectral::forward(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_),
                   const_cast<fftw_complex*>(as_fftw(in)), as_fftw(out));
}

void Spectral::inverse(const cplx* in, cplx* out) const {
  fftw_execute_dft(static_cast<fftw_plan>(plan_inv_),
                   const_cast<fftw_complex*>(as_fftw(in)), as_fftw(out));
  const double inv_n = 1.0 / static_cast<double>(g_.cells());
  const std::size_t nc = g_.cells();
  parallel_for(nc, worker_threads(), [&](std::size_t i) { out[i] *= inv_n; });
}

void Spectral::gradient(const ComplexField& u,
                        std::array<ComplexField, 3>& grad) const {
  const std::size_t nc = g_.cells();
  std::vector<cplx> uhat(nc), dhat(nc);
  forward(u.a.data(), uhat.data());
  for (int a = 0; a < g_.dim; ++a) {
    if (grad[a].grid.cells() != nc) grad[a] = ComplexField(g_);
    grad[a].t = u.t;
    const std::vector<double>& kd = kd_[a];
    parallel_for(nc, worker_threads(), [&](std::size_t idx) {
      int i, j, k;
      decode_index(g_, idx, i, j, k);
      int m = (a == 0) ? i : (a == 1 ? j : k);
      dhat[idx] = cplx(0.0, kd[m]) * uhat[idx];
    });
    inverse(dhat.data(), grad[a].a.data());
  }
}

void Spectral::laplacian(const ComplexField& u, ComplexField& out) const {
  const std::size_t nc = g_.cells();
  std::vector<cplx> uhat(nc);
  forward(u.a.data(), uhat.data());
  parallel_for(nc, worker_threads(),
               [&](std::size_t i) { uhat[i] *= -k2_[i]; });
  if (out.grid.cells() != nc) out = ComplexField(g_);
  out.t = u.t;
  inverse(uhat.data(), out.a.data());
}

void Spectral::poisson_neg(const ComplexField& rhs, ComplexField& out) const {
  const std::size_t nc = g_.cells();
  std::vector<cplx> rhat(nc);
  forward(rhs.a.data(), rhat.data());
  rhat[0] = 0.0;  // zero-mean solution; mean of rhs is discarded
  parallel_for(nc, worker_threads(), [&](std::size_t i) {
    if (i != 0) rhat[i] /= k2_[i];
  });
  if (out.grid.cells() != nc) out = ComplexField(rhs.grid);
  out.t = rhs.t;
  inverse(rhat.data(), out.a.data());
}

void Spectral::apply_heat_decay(cplx* uhat, double dt) const {
  const std::size_t nc = g_.cells();
  if (decay_dt_ != dt) {
    decay_.resize(nc);
    parallel_for(nc, worker_threads(),
                 [&](std::size_t i) { decay_[i] = std::exp(-k2_[i] * dt); });
    decay_dt_ = dt;
  }
  parallel_for(nc, worker_threads(),
               [&](std::size_t i) { uhat[i] *= decay_[i]; });
}

const Spectral& spectral_for(const GridSpec& g) {
  static std::mutex reg_mutex;
  // Keyed on shape and spacing: epsilon does not affect transforms but h
  // does (wavenumbers).  Entries live for the program lifetime so returned
  // references stay valid.
  using Key = std::tuple<int, int, int, int, double>;
  static std::map<Key, std::unique_ptr<Spectral>> registry;
  Key key{g.dim, g.n[0], g.n[1], g.n[2], g.h};
  std::lock_guard<std::mutex> lock(reg_mutex);
  auto& slot = registry[key];
  if (!slot) slot = std::make_unique<Spectral>(g);
  return *slot;
}

std::string fft_backend_version() { return fftw_version; }

namespace {
int g_threads = 1;
}
int worker_threads() { return g_threads; }
void set_worker_threads(int n) { g_threads = n < 1 ? 1 : n; }

}  // namespace glflow
