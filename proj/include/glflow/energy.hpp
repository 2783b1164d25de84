#pragma once

#include <array>
#include <functional>
#include <vector>

#include "glflow/field.hpp"

namespace glflow {

// Gradient discretization used when forming the energy density.  Spectral
// derivatives are the default; the centered-difference variant stays local,
// which matters near vortex cores where spectral ringing contaminates the
// far field of the density.
enum class GradientMode { kSpectral, kCentralFD, kCentralFD4 };

// e = |grad u|^2 / 2 + (1 - |u|^2)^2 / (4 eps^2), one value per grid point.
std::vector<double> energy_density(const ComplexField& u,
                                   GradientMode mode = GradientMode::kSpectral);

// Potential part (1 - |u|^2)^2 / (4 eps^2) alone.
std::vector<double> potential_density(const ComplexField& u);

// Midpoint-rule integral of a density over the whole torus.
double integrate(const GridSpec& g, const std::vector<double>& density);

double total_energy(const ComplexField& u,
                    GradientMode mode = GradientMode::kSpectral);

// sup over ball centers of the energy in balls of the given radius.  Centers
// run over a sub-lattice with physical spacing about 1/2, which bounds the
// sup from below; the caller divides by log(1/eps) when a density scale is
// wanted.
double sup_local_energy(const GridSpec& g, const std::vector<double>& density,
                        double radius);

// Backward-weighted energy of one time slice: R^{2-d} * sum of
// density * exp(-|x - center|^2 / (4 R^2)) * h^d.  The slice is expected to
// sit at time tstar - R^2; the caller owns that bookkeeping.  image_sum
// switches the truncated window for the 3^d periodic image oracle.
double weighted_energy(const GridSpec& g, const std::vector<double>& density,
                       const double* center, double R, bool image_sum = false);

// Integral of a density against the unit-mass Gaussian kernel
// (4 pi s)^{-d/2} exp(-|x - center|^2 / (4 s)).  image_sum switches to the
// periodized kernel (3^d images), the exact heat kernel of the torus.
double kernel_average(const GridSpec& g, const std::vector<double>& density,
                      const double* center, double s, bool image_sum = false);

// Pointwise |(x - x*) . grad u + 2 (t - t*) du/dt|^2 / (4 |t - t*|) with
// min-image displacements.  dudt is the PDE right-hand side at the same
// time.  Throws if the slice sits exactly at t*.
std::vector<double> xi_density(const ComplexField& u, const ComplexField& dudt,
                               const double* xstar, double tstar);

// Analytic test fields.  Both callbacks receive the physical coordinates of
// a grid point; gradients are supplied by the caller so no derivative of the
// test field is ever taken numerically.
//   vector field: fills X[3] and G[9] with G[3*i + j] = dX_i/dx_j.
//   scalar field: fills chi and gchi[3].
using VectorTestField =
    std::function<void(const double* x, double* X, double* G)>;
using ScalarTestField =
    std::function<void(const double* x, double& chi, double* gchi)>;

// Residual of the weak stationarity identity
//   integral A : grad X  -  integral Re(w d_i conj(u)) X_i  =  0,
// A_ij = e delta_ij - Re(d_i u d_j conj(u)), w = du/dt from the equation,
// normalized by log(1/eps).  Vanishes identically in the continuum for any
// field once w is defined through the right-hand side; the discrete value
// measures quadrature error only.
double stress_residual(const ComplexField& u, const ComplexField& w,
                       const VectorTestField& X,
                       GradientMode mode = GradientMode::kSpectral);

// Localized energy integral mu(chi) = integral chi e / log(1/eps).
double chi_measure(const ComplexField& u, const ScalarTestField& chi,
                   GradientMode mode = GradientMode::kSpectral);

// Instantaneous rate the balance law assigns to mu(chi):
//   ( - integral chi |w|^2 - integral grad chi . Re(w grad conj(u)) )
//     / log(1/eps).
double balance_rhs(const ComplexField& u, const ComplexField& w,
                   const ScalarTestField& chi);

}  // namespace glflow
