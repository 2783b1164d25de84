#pragma once

#include <array>
#include <vector>

#include "glflow/energy.hpp"

namespace glflow {

// Polyline curve evolved by its curvature vector.  This little solver never
// sees the order-parameter field; it exists so the PDE's filament motion can
// be checked against an independent discretization of the limit law.
struct Curve {
  std::vector<std::array<double, 3>> x;
  bool closed = true;
};

// Exact radius of a shrinking circle: sqrt(max(0, R0^2 - 2 t)).
double circle_radius(double R0, double t);

Curve make_circle(double R0, const std::array<double, 3>& center, int n);

double curve_length(const Curve& c);

// Discrete curvature vectors: 2 [ (x+ - x)/s+ - (x - x-)/s- ] / (s+ + s-).
// Exact (1/R) on a uniform polygon inscribed in a circle.  Endpoints of an
// open curve are pinned (zero).
std::vector<std::array<double, 3>> curvature_vectors(const Curve& c);

// Redistribute n points uniformly in arclength (endpoints of an open curve
// stay put).
void resample_uniform(Curve& c, int n);

// Forward-Euler curvature flow with a 1-4-6-4-1 smoothing of the curvature
// field and periodic uniform resampling.  dt = dt_factor * (min spacing)^2,
// re-evaluated as the curve shrinks.
void evolve_curve(Curve& c, double t_end, double dt_factor = 0.2);

// Radius statistics of a closed loop about its centroid.
struct RadiusFit {
  std::array<double, 3> center{0, 0, 0};
  double mean = 0.0;
  double rms_dev = 0.0;  // rms of (|x - center| - mean)
};
RadiusFit fitted_radius(const Curve& c);

// Symmetric Hausdorff distance between polylines (vertex-to-segment).
double hausdorff_distance(const Curve& a, const Curve& b);

// Weighted length measure nu(chi) = pi * sum chi(midpoint) * segment length.
double curve_measure(const Curve& c, const ScalarTestField& chi);

// Rate the limit law assigns to nu(chi):
//   pi * sum ( -chi |H|^2 + grad chi . H ) * segment length,
// curvature taken at segment midpoints.
double brakke_rate(const Curve& c, const ScalarTestField& chi);

}  // namespace glflow
