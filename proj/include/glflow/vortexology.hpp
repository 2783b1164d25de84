#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "glflow/field.hpp"

namespace glflow {

// --- Winding numbers and the discrete Jacobian ---------------------------
//
// The winding of plaquette (i, j) is the sum of principal-value phase
// increments around its four edges divided by 2*pi; it is an exact integer
// for any nowhere-zero field.  The Jacobian density pi * w / h^2 pairs
// against test functions like the continuum Jacobian and integrates to
// pi * (enclosed degree) over any region that swallows whole clusters.

// 2-d: winding per plaquette, indexed like grid points (plaquette (i,j)
// has corners (i,j)..(i+1,j+1) mod n).
std::vector<int> plaquette_windings(const ComplexField& u);

// Sum of pi * w over plaquettes whose centers lie in the min-image ball.
double jacobian_ball_integral(const ComplexField& u,
                              std::array<double, 2> center, double radius);

// h^2 * sum of (pi w / h^2) * phi(plaquette center).
double jacobian_pairing(const ComplexField& u,
                        const std::function<double(double, double)>& phi);

struct ConcentrationCheck {
  double measured;
  double expected;
  double abs_err;
};
ConcentrationCheck jacobian_concentration_check(
    const ComplexField& u, const std::function<double(double, double)>& phi,
    const std::vector<std::array<double, 2>>& centers,
    const std::vector<int>& degrees);

// --- Vortex detection and tracking (2-d) ----------------------------------

struct VortexRecord {
  std::array<double, 2> pos;
  int degree;
  double min_mod;   // smallest |u| on the cluster's cells
  double mass;      // excess local energy / |ln eps|; NaN if no density given
  bool merged;      // true if clusters closer than 4 eps were merged
};

// energy_density, if given, must be the pointwise energy e_eps in storage
// order; it feeds the mass entry: the energy in a ball of radius r_mass
// minus the median background on the [2 r_mass, 3 r_mass] annulus times the
// ball area, over log(1/eps).  r_mass <= 0 selects the default 10 eps; pass
// something smaller when the configuration scale (e.g. vortex separation)
// is within a few multiples of 10 eps, or the annulus stops sampling
// background.
std::vector<VortexRecord> detect_vortices(
    const ComplexField& u, const std::vector<double>* energy_density = nullptr,
    std::vector<std::string>* log = nullptr, double r_mass = 0.0);

struct TrackPoint {
  double t;
  std::array<double, 2> pos;
  double mass;
  double min_mod;
};

struct VortexTrack {
  int id;
  int degree;
  std::vector<TrackPoint> pts;
  bool open;  // still matched at the last observed sample
};

// Greedy nearest-neighbor association with a gate distance (default 3h) and
// hard degree matching.  Records are processed in deterministic order.
class VortexTracker {
 public:
  explicit VortexTracker(const GridSpec& g, double gate = 0.0);
  void observe(double t, const std::vector<VortexRecord>& recs);
  // Replaces the internal state wholesale (resume path).  Tracks must be
  // ordered by id starting at 0.
  void restore(std::vector<VortexTrack> tracks);
  const std::vector<VortexTrack>& tracks() const { return tracks_; }
  const std::vector<std::string>& log() const { return log_; }

 private:
  GridSpec g_;
  double gate_;
  std::vector<VortexTrack> tracks_;
  std::vector<std::string> log_;
};

// --- Filaments (3-d) -------------------------------------------------------

struct Filament {
  std::vector<std::array<double, 3>> verts;  // unwrapped coordinates
  bool closed = false;
  bool degraded = false;  // branching or dead end encountered while tracing
  double length() const;
};

// Cells whose faces carry nonzero winding are linked face-to-face into
// polylines (vertices at cell centers), then smoothed by one Laplacian pass.
std::vector<Filament> extract_filaments(const ComplexField& u);

// --- Clearing-out ----------------------------------------------------------

enum class ClearingVerdict { kPass, kFail, kNotApplicable };

struct ClearingOutResult {
  double eta_tilde;      // R^(2-d) * E(B(x_T, lambda R)) / |ln eps|
  double threshold;      // eta_cfg / 2
  ClearingVerdict verdict;
  double min_mod;        // smallest |u| seen on the checked window; NaN if NA
  double t0;             // start of the checked time window (offset from T)
};

// eta_tilde from an energy density at time T.
double clearing_out_eta(const GridSpec& g, const std::vector<double>& energy,
                        std::array<double, 3> x_T, double R, double lambda_cfg);

// Verdict: NOT-APPLICABLE when eta_tilde exceeds eta_cfg / 2; otherwise the
// field must satisfy |u| >= 1 - sigma on B(x_T, R/2) across
// [T + T0, T + R^2] with T0 = max(2 eps, (2 eta/eta_cfg)^(2/(d-2)) R^2)
// (T0 = 2 eps in 2-d).  min_mod_samples holds (t - T, min |u| on the ball)
// pairs covering that window.
ClearingOutResult clearing_out_verdict(
    const GridSpec& g, double eta_tilde, double eta_cfg, double sigma,
    double R, const std::vector<std::pair<double, double>>& min_mod_samples);

}  // namespace glflow
