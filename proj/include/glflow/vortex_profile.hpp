#pragma once

#include <stdexcept>

namespace glflow {

// Radial modulus profile U_l of a degree-l vortex in rescaled radius
// r = |x|/epsilon: solves U'' + U'/r - l^2 U/r^2 + U(1 - U^2) = 0 with
// U(0) = 0 and U -> 1 at infinity.  The profile depends on |l| only.
//
// The solver runs once per degree (damped Newton on a second-order finite
// difference discretization of the boundary-value problem, dense radial
// mesh on [0, 24]) and is cached as a cubic spline.  Beyond the mesh the
// far-field tail 1 - l^2/(2 r^2) is returned.
double vortex_profile(int degree, double r);

}  // namespace glflow
