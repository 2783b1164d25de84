#pragma once

#include <functional>
#include <vector>

#include "glflow/field.hpp"

namespace glflow {

enum class Scheme { kSpectralIF, kExplicitFD };

// Time integrators for du/dt = lap(u) + u (1 - |u|^2) / eps^2.
//
// kSpectralIF damps the stiff Laplacian exactly through the integrating
// factor exp(-|k|^2 dt) and treats the reaction term explicitly; order
// selects forward Euler (1) or Heun (2) on the factored system.
// kExplicitFD is the deliberately plain cross-check: centered second
// differences and forward Euler, first order, kept free of spectral
// machinery so the two paths share no discretization choices.
struct StepperConfig {
  Scheme scheme = Scheme::kSpectralIF;
  int order = 1;      // spectral only; the FD oracle is always order 1
  double dt = 0.0;    // 0 picks the scheme's stability default
};

// Largest admissible step: eps^2/4 for the spectral scheme,
// min(h^2/(2 dim), eps^2/4) for the explicit oracle.
double stability_limit(const GridSpec& g, Scheme scheme);

// Reaction + spectral Laplacian; the PDE right side used for callbacks and
// field-level diagnostics.
ComplexField pde_rhs(const ComplexField& u);

using StopCallback =
    std::function<void(const ComplexField& u, const ComplexField& dudt)>;

// Advance u in place to t_end, landing exactly on every time in `stops`
// (ascending, within (u.t, t_end]) and invoking on_stop there and at t_end.
// The step sequence is a pure function of (u.t, t_end, stops, cfg), so runs
// are reproducible and checkpoint/resume splices are exact.
void evolve_to(ComplexField& u, double t_end, const StepperConfig& cfg,
               const std::vector<double>& stops = {},
               const StopCallback& on_stop = nullptr);

// Comparison-principle bound: sup_x (|u(t)|^2 - 1) <= y(t / eps^2) where
// y is the explicit supersolution launched from the initial supremum
// sup_mod0 = sup |u(0)|.  For sup_mod0 <= 1 the bound degenerates to 0.
struct SupersolutionCheck {
  double bound;
  double measured;  // sup(|u|^2 - 1), may be negative
  double margin;    // bound - measured
  bool pass;        // measured <= bound + 1e-3
};
SupersolutionCheck supersolution_check(double sup_mod0, const ComplexField& u);

double sup_mod(const ComplexField& u);

}  // namespace glflow
