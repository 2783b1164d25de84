#pragma once

#include <cmath>

#include "glflow/energy.hpp"
#include "glflow/grid.hpp"

namespace glflow {

// Periodic C-infinity test functions used by the balance and stress
// diagnostics.  Gradients are supplied analytically so the identities are
// probed with exact test data.

inline ScalarTestField make_unit_chi() {
  return [](const double*, double& chi, double* gchi) {
    chi = 1.0;
    gchi[0] = gchi[1] = gchi[2] = 0.0;
  };
}

// Product of exp(kappa (cos(2 pi (x_a - c_a)/L_a) - 1)) over the axes:
// a smooth periodic bump peaking at `center` with value 1.
inline ScalarTestField make_cos_bump_at(const GridSpec& g, double kappa,
                                        const double* center) {
  const int d = g.dim;
  double L[3] = {g.length(0), g.length(1), d == 3 ? g.length(2) : 1.0};
  double c[3] = {center[0], center[1], d == 3 ? center[2] : 0.0};
  return [d, kappa, L, c](const double* x, double& chi, double* gchi) {
    double f[3] = {1.0, 1.0, 1.0};
    double w[3];
    for (int a = 0; a < d; ++a) {
      w[a] = 2.0 * M_PI * (x[a] - c[a]) / L[a];
      f[a] = std::exp(kappa * (std::cos(w[a]) - 1.0));
    }
    chi = f[0] * f[1] * f[2];
    gchi[0] = gchi[1] = gchi[2] = 0.0;
    for (int a = 0; a < d; ++a)
      gchi[a] = chi * (-kappa * std::sin(w[a])) * 2.0 * M_PI / L[a];
  };
}

// Same bump centered in the box.
inline ScalarTestField make_cos_bump(const GridSpec& g, double kappa) {
  double c[3] = {0.5 * g.length(0), 0.5 * g.length(1),
                 g.dim == 3 ? 0.5 * g.length(2) : 0.0};
  return make_cos_bump_at(g, kappa, c);
}

// Smooth periodic vector field with analytic Jacobian:
//   X_a = sin(2 pi x_a / L_a) * prod_{b != a} cos(2 pi x_b / L_b).
inline VectorTestField make_trig_vector_field(const GridSpec& g) {
  const int d = g.dim;
  double L[3] = {g.length(0), g.length(1), d == 3 ? g.length(2) : 1.0};
  return [d, L](const double* x, double* X, double* G) {
    double s[3] = {0, 0, 0}, c[3] = {1, 1, 1}, k[3] = {0, 0, 0};
    for (int a = 0; a < d; ++a) {
      k[a] = 2.0 * M_PI / L[a];
      s[a] = std::sin(k[a] * x[a]);
      c[a] = std::cos(k[a] * x[a]);
    }
    for (int a = 0; a < 3; ++a) {
      X[a] = 0.0;
      for (int b = 0; b < 3; ++b) G[3 * a + b] = 0.0;
    }
    for (int a = 0; a < d; ++a) {
      double prod = 1.0;
      for (int b = 0; b < d; ++b)
        if (b != a) prod *= c[b];
      X[a] = s[a] * prod;
      for (int b = 0; b < d; ++b) {
        if (b == a) {
          G[3 * a + b] = k[a] * c[a] * prod;
        } else {
          double rest = 1.0;
          for (int m = 0; m < d; ++m)
            if (m != a && m != b) rest *= c[m];
          G[3 * a + b] = s[a] * (-k[b] * s[b]) * rest;
        }
      }
    }
  };
}

}  // namespace glflow
