#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace glflow {

// Uniform periodic grid on [0, L0) x [0, L1) (x [0, L2)), equal spacing h on
// every axis.  epsilon is carried here because every resolution constraint
// couples the PDE length scale to the mesh.
struct GridSpec {
  int dim = 2;
  std::array<int, 3> n{8, 8, 1};  // cells per axis; n[2] == 1 in 2-d
  double h = 0.5;
  double epsilon = 1.5;

  std::size_t cells() const {
    return static_cast<std::size_t>(n[0]) * n[1] * n[2];
  }
  double length(int axis) const { return n[axis] * h; }
  double min_length() const {
    double m = length(0);
    for (int a = 1; a < dim; ++a) m = std::min(m, length(a));
    return m;
  }
  bool operator==(const GridSpec&) const = default;
};

// Validating constructor: rejects grids on which the solver or the
// diagnostics would be meaningless rather than merely inaccurate.
inline GridSpec make_grid(int dim, std::array<int, 3> n, double h,
                          double epsilon) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("make_grid: dim must be 2 or 3, got " +
                                std::to_string(dim));
  if (dim == 2) n[2] = 1;
  for (int a = 0; a < dim; ++a) {
    if (n[a] < 8 || n[a] % 2 != 0)
      throw std::invalid_argument(
          "make_grid: axis " + std::to_string(a) + " has " +
          std::to_string(n[a]) + " cells; need at least 8 and even");
  }
  if (!(h > 0.0)) throw std::invalid_argument("make_grid: h must be positive");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("make_grid: epsilon must be positive");
  if (epsilon < 3.0 * h - 1e-12 * h)
    throw std::invalid_argument(
        "make_grid: epsilon = " + std::to_string(epsilon) +
        " under-resolved: need epsilon >= 3h = " + std::to_string(3.0 * h));
  GridSpec g{dim, n, h, epsilon};
  if (g.min_length() < 16.0 * epsilon - 1e-12)
    throw std::invalid_argument(
        "make_grid: domain extent " + std::to_string(g.min_length()) +
        " too small: need every side >= 16 epsilon = " +
        std::to_string(16.0 * epsilon));
  return g;
}

// Shortest signed displacement a - b on the periodic axis.
inline double min_image(double d, double L) {
  return d - L * std::round(d / L);
}

// Squared min-image distance between points p and q.
inline double min_image_dist2(const GridSpec& g, const double* p,
                              const double* q) {
  double s = 0;
  for (int a = 0; a < g.dim; ++a) {
    double d = min_image(p[a] - q[a], g.length(a));
    s += d * d;
  }
  return s;
}

inline double log_inv_eps(double epsilon) { return std::log(1.0 / epsilon); }

}  // namespace glflow
