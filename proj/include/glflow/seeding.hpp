#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "glflow/field.hpp"

namespace glflow {

struct PointVortex {
  std::array<double, 2> pos;
  int degree;
};

struct SeedReport {
  bool proximity_warning = false;  // cores closer than 4*epsilon
  std::vector<std::string> notes;
};

ComplexField seed_constant(const GridSpec& g, cplx value);
inline ComplexField seed_vacuum(const GridSpec& g) {
  return seed_constant(g, {1.0, 0.0});
}

// u = exp(i k.x) with k = 2*pi*mode/L, exactly periodic.
ComplexField seed_plane_wave(const GridSpec& g, std::array<int, 3> mode);

// Balanced 2-d point-vortex configuration with fully periodic phase.  Each
// core deposits its whole 2*pi*degree circulation into the grid cell
// containing it and the phase comes from the exact lattice stream function,
// so every cell's discrete winding is an integer and the field is smooth
// across the torus seams (the zero sits at the depositing cell, within h of
// the requested position).  The modulus is the product of radial core
// profiles.  Net degree must vanish; coincident cores (closer than h) are
// rejected.
ComplexField seed_vortex_configuration(const GridSpec& g,
                                       const std::vector<PointVortex>& vs,
                                       SeedReport* report = nullptr);

// Single vortex ring of radius R0 in the plane z = center[2], axis along z:
// u = U_1(rho_c/eps) exp(i theta_c) in the meridian half-plane coordinates
// (s, z) about the core circle, with the angle tapered to zero over the
// outermost eighth of the axial period so the field is periodic.  The taper
// spreads the balancing counter-circulation (which any neutral periodic
// configuration must hold somewhere) so thin that no face winds at t = 0 --
// the seeded field carries exactly one closed filament; under evolution the
// diffuse part condenses into a counter-rotating loop near the antipodal
// plane.
ComplexField seed_vortex_ring(const GridSpec& g, double R0,
                              std::array<double, 3> center);

// u = exp(i phi) with phi a band-limited random superposition of plane
// waves: modes drawn with |m_a| <= mode_cap, spectral weights
// exp(-|k|^2 corr_len^2 / 4), phases from the seeded generator, then phi is
// rescaled to the requested RMS amplitude.
ComplexField seed_random_phase(const GridSpec& g, double amplitude,
                               double corr_len, int mode_cap,
                               std::uint64_t seed);

// Diagnostic fixture: one unbalanced vortex written in min-image
// coordinates.  The phase necessarily tears along the wrap seam at
// distance L/2 from the core, so this field is only meaningful for local
// quadrature probes well inside the seam; it must not be evolved.
ComplexField make_isolated_vortex(const GridSpec& g,
                                  std::array<double, 2> center, int degree);

}  // namespace glflow
