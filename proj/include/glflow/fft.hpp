#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "glflow/field.hpp"
#include "glflow/grid.hpp"

namespace glflow {

// Serial spectral engine for one grid shape.  Plans are created with
// FFTW_ESTIMATE so planning is heuristic-only and runs are reproducible;
// transforms execute on caller buffers (unaligned new-array interface).
//
// Conventions: forward() is unnormalized, inverse() divides by the cell
// count.  Mode m on an axis of extent N carries wavenumber 2*pi*s(m)/L with
// s(m) the signed index; first derivatives zero the Nyquist mode, |k|^2
// keeps it.
class Spectral {
 public:
  explicit Spectral(const GridSpec& g);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const GridSpec& grid() const { return g_; }

  void forward(const cplx* in, cplx* out) const;
  void inverse(const cplx* in, cplx* out) const;

  // |k|^2 per storage index.
  const std::vector<double>& k2() const { return k2_; }
  // Derivative wavenumber along axis (Nyquist zeroed), indexed by the
  // per-axis mode index.
  const std::vector<double>& k_deriv(int axis) const { return kd_[axis]; }

  // grad[a] <- d/dx_a u, spectral, for a < dim.
  void gradient(const ComplexField& u, std::array<ComplexField, 3>& grad) const;
  void laplacian(const ComplexField& u, ComplexField& out) const;

  // Solve -lap(phi) = rhs with mean(phi) = 0; rhs mean is discarded.
  void poisson_neg(const ComplexField& rhs, ComplexField& out) const;

  // uhat *= exp(-|k|^2 dt); the decay table is cached for repeated dt.
  void apply_heat_decay(cplx* uhat, double dt) const;

 private:
  GridSpec g_;
  void* plan_fwd_ = nullptr;
  void* plan_inv_ = nullptr;
  std::vector<double> k2_;
  std::array<std::vector<double>, 3> kd_;
  mutable std::vector<double> decay_;
  mutable double decay_dt_ = -1.0;
};

// Shared engine registry keyed by grid shape (plan reuse across calls).
const Spectral& spectral_for(const GridSpec& g);

// Transform library identification, for environment fingerprints.
std::string fft_backend_version();

}  // namespace glflow
