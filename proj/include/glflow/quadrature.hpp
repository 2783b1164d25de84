#pragma once

#include <vector>

#include "glflow/grid.hpp"

namespace glflow {

// Midpoint-rule sums of a scalar density (storage order matches
// ComplexField) against simple windows, all min-image on the torus.

// sum of density * h^d over grid points with |x - center| <= radius.
double ball_sum(const GridSpec& g, const std::vector<double>& density,
                const double* center, double radius);

// Median of the density over the annulus radius_in <= |x - center| <=
// radius_out (empty annulus returns 0).
double annulus_median(const GridSpec& g, const std::vector<double>& density,
                      const double* center, double radius_in,
                      double radius_out);

// sum of density * exp(-|x - center|^2 / (4 R^2)) * h^d with the weight cut
// off at min(6R, L/2 - h).  image_sum replaces the cutoff with a brute
// 3^d periodic image sum of the full Gaussian (slow; reference oracle).
double gaussian_weighted_sum(const GridSpec& g,
                             const std::vector<double>& density,
                             const double* center, double R,
                             bool image_sum = false);

// min over grid points of a density restricted to a ball.
double ball_min(const GridSpec& g, const std::vector<double>& density,
                const double* center, double radius);

}  // namespace glflow
