#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "glflow/grid.hpp"

namespace glflow {

// Flat dotted-key run configuration.  Unknown keys, duplicate keys, and
// malformed values are hard errors naming the offender; silent defaults are
// reserved for genuinely optional knobs.
struct RunConfig {
  int dim = 0;
  int n = 0;
  double length = 0.0;
  double epsilon = 0.0;

  std::string init_kind;  // constant|vacuum|plane_wave|dipole|vortices|
                          // random_phase|ring
  double value_re = 1.0, value_im = 0.0;
  std::array<int, 3> mode = {0, 0, 0};
  double separation = 0.0;
  // triples "x,y,deg" separated by ';'
  std::vector<std::array<double, 3>> vortices;
  double amplitude = 0.0;
  double corr_length = 0.0;
  int mode_cap = 8;
  double radius = 0.0;
  std::array<double, 3> center = {0, 0, 0};
  bool center_set = false;

  double t_end = 0.0;
  double dt = 0.0;  // 0 = stability limit
  std::string scheme = "spectral";
  int order = 1;

  std::uint64_t seed = 1;

  std::vector<double> snapshot_times;
  double snapshot_every = 0.0;
  double diag_every = 0.0;
  bool diag_energy = true;
  bool diag_vortices = false;
  bool diag_filaments = false;
  bool diag_balance = false;
  bool diag_supersolution = false;
  bool diag_bounds = false;
  bool diag_xi = false;  // stream the space-time kernel integrand
  std::array<double, 3> xi_center = {0, 0, 0};
  double xi_tstar = 0.0;
  double track_gate = 0.0;  // 0 = 3h
  double mass_radius = 0.0;  // vortex mass ball radius; 0 = 10 eps
  double checkpoint_at = 0.0;
  std::string output_dir;

  GridSpec make_grid_spec() const;
};

RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

// Normalized, sorted rendering of the configuration; two configs with the
// same semantics canonicalize identically.
std::string canonical_text(const RunConfig& cfg);

std::uint64_t fnv1a(const void* data, std::size_t n);
inline std::uint64_t config_hash(const RunConfig& cfg) {
  std::string s = canonical_text(cfg);
  return fnv1a(s.data(), s.size());
}

}  // namespace glflow
