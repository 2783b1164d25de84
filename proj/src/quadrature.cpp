#include "glflow/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "glflow/field.hpp"
#include "glflow/reduce.hpp"

namespace glflow {

namespace {

double cell_volume(const GridSpec& g) {
  double v = 1.0;
  for (int a = 0; a < g.dim; ++a) v *= g.h;
  return v;
}

// Visit all grid points with min-image distance <= radius of center,
// in storage order, calling f(flat_index, dist2).
template <class F>
void for_ball(const GridSpec& g, const double* center, double radius,
              F&& f) {
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) {
    int c = static_cast<int>(std::floor(center[a] / g.h));
    int reach = static_cast<int>(std::ceil(radius / g.h)) + 1;
    reach = std::min(reach, g.n[a] / 2);
    lo[a] = c - reach;
    hi[a] = c + reach;
    if (hi[a] - lo[a] + 1 >= g.n[a]) {
      lo[a] = 0;
      hi[a] = g.n[a] - 1;
    }
  }
  if (g.dim == 2) {
    lo[2] = hi[2] = 0;
  }
  const double r2 = radius * radius;
  for (int i = lo[0]; i <= hi[0]; ++i) {
    int iw = ((i % g.n[0]) + g.n[0]) % g.n[0];
    double dx = min_image(i * g.h - center[0], g.length(0));
    for (int j = lo[1]; j <= hi[1]; ++j) {
      int jw = ((j % g.n[1]) + g.n[1]) % g.n[1];
      double dy = min_image(j * g.h - center[1], g.length(1));
      for (int k = lo[2]; k <= hi[2]; ++k) {
        int kw = g.dim == 3 ? ((k % g.n[2]) + g.n[2]) % g.n[2] : 0;
        double dz =
            g.dim == 3 ? min_image(k * g.h - center[2], g.length(2)) : 0.0;
        double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 <= r2)
          f((static_cast<std::size_t>(iw) * g.n[1] + jw) * g.n[2] + kw, d2);
      }
    }
  }
}

}  // namespace

double ball_sum(const GridSpec& g, const std::vector<double>& density,
                const double* center, double radius) {
  // Collect then pairwise-sum so the result is independent of traversal
  // chunking.
  std::vector<double> vals;
  for_ball(g, center, radius,
           [&](std::size_t idx, double) { vals.push_back(density[idx]); });
  return pairwise_sum(vals) * cell_volume(g);
}

double ball_min(const GridSpec& g, const std::vector<double>& density,
                const double* center, double radius) {
  double m = std::numeric_limits<double>::infinity();
  for_ball(g, center, radius, [&](std::size_t idx, double) {
    m = std::min(m, density[idx]);
  });
  return m;
}

double annulus_median(const GridSpec& g, const std::vector<double>& density,
                      const double* center, double radius_in,
                      double radius_out) {
  std::vector<double> vals;
  for_ball(g, center, radius_out, [&](std::size_t idx, double d2) {
    if (d2 >= radius_in * radius_in) vals.push_back(density[idx]);
  });
  if (vals.empty()) return 0.0;
  std::size_t mid = vals.size() / 2;
  std::nth_element(vals.begin(), vals.begin() + mid, vals.end());
  return vals[mid];
}

double gaussian_weighted_sum(const GridSpec& g,
                             const std::vector<double>& density,
                             const double* center, double R, bool image_sum) {
  if (!(R > 0))
    throw std::invalid_argument("gaussian_weighted_sum: R must be positive");
  if (!image_sum) {
    double cut = std::min(6.0 * R, 0.5 * g.min_length() - g.h);
    std::vector<double> vals;
    for_ball(g, center, cut, [&](std::size_t idx, double d2) {
      vals.push_back(density[idx] * std::exp(-d2 / (4.0 * R * R)));
    });
    return pairwise_sum(vals) * cell_volume(g);
  }
  // Brute periodic-image reference: every grid point, 3^d images, no cutoff.
  const std::size_t nc = g.cells();
  std::vector<double> vals(nc);
  for (std::size_t idx = 0; idx < nc; ++idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    double w = 0.0;
    for (int mi = -1; mi <= 1; ++mi)
      for (int mj = -1; mj <= 1; ++mj) {
        if (g.dim == 2) {
          double dx = i * g.h - center[0] + mi * g.length(0);
          double dy = j * g.h - center[1] + mj * g.length(1);
          w += std::exp(-(dx * dx + dy * dy) / (4.0 * R * R));
        } else {
          for (int mk = -1; mk <= 1; ++mk) {
            double dx = i * g.h - center[0] + mi * g.length(0);
            double dy = j * g.h - center[1] + mj * g.length(1);
            double dz = k * g.h - center[2] + mk * g.length(2);
            w += std::exp(-(dx * dx + dy * dy + dz * dz) / (4.0 * R * R));
          }
        }
      }
    vals[idx] = density[idx] * w;
  }
  return pairwise_sum(vals) * cell_volume(g);
}

}  // namespace glflow
