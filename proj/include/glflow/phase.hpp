#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "glflow/energy.hpp"
#include "glflow/field.hpp"

namespace glflow {

// Splitting of the supercurrent j = Im(conj(u) grad u) into an exact
// gradient, a divergence-free part, and the harmonic constant:
//   j = grad phi + sol + c.
// phi and (in 2-d) the stream function psi are mean-zero.  The divergence
// free part is reconstructed through the stream function / vector potential
// rather than by subtraction, so `residual` is a genuine consistency check
// of the projections instead of an identity.
struct HodgeParts {
  std::vector<double> phi;
  std::vector<double> psi;  // 2-d only; empty in 3-d
  std::array<std::vector<double>, 3> grad_phi;
  std::array<std::vector<double>, 3> sol;
  double c[3] = {0, 0, 0};
  double residual = 0.0;  // sup over components of |j - grad phi - sol - c|
};

HodgeParts hodge_decompose(const ComplexField& u);

// Unwrapped phase of u, split into integer cycle windings around the torus
// and a periodic remainder, after heat evolution for time t_heat.
struct PhaseSplit {
  std::vector<double> phi;  // periodic part of the evolved phase
  std::array<int, 3> winding = {0, 0, 0};
  double t_heat = 0.0;
};

// Unwraps arg(u) over the region where the modulus clears mod_threshold
// (or over an explicit cell mask), fills the complement harmonically, and
// evolves the result by the periodic heat semigroup.  Cycle windings along
// the torus directions are detected and carried as a linear (harmonic)
// part.  Throws when the region's phase cannot be unwrapped consistently
// (an enclosed zero leaves a 2 pi mismatch across some edge); the message
// names offending cells.
PhaseSplit extract_heat_phase(const ComplexField& u, double t_heat,
                              double mod_threshold = 0.5,
                              const std::vector<std::uint8_t>* region_mask =
                                  nullptr);

// Gradient of the evolved phase, linear winding part included.
std::array<std::vector<double>, 3> heat_phase_gradient(const GridSpec& g,
                                                       const PhaseSplit& ps);

// kappa = e(u) - |grad Phi|^2 / 2, the energy left over once the
// heat-evolved phase is subtracted.  Signed: slightly negative values are
// legitimate (a plane wave's modulus response undershoots).
std::vector<double> kappa_density(const ComplexField& u, const PhaseSplit& ps,
                                  GradientMode mode = GradientMode::kSpectral);

// integral |kappa| / integral e  — the fraction of energy the heat phase
// fails to explain.
double kappa_l1_ratio(const ComplexField& u, const PhaseSplit& ps,
                      GradientMode mode = GradientMode::kSpectral);

// sup |kappa| / sup e.  Shrinks with epsilon on vortex-free data.
double kappa_sup_ratio(const ComplexField& u, const PhaseSplit& ps,
                       GradientMode mode = GradientMode::kSpectral);

// sup |(1 - |u|^2) - eps^2 |grad Phi|^2| and the reference magnitude
// eps^2 sup |grad Phi|^2, for modulus-response checks.
struct ModulusAsymptotics {
  double max_defect = 0.0;
  double scale = 0.0;
};
ModulusAsymptotics modulus_asymptotics(const ComplexField& u,
                                       const PhaseSplit& ps);

}  // namespace glflow
