#pragma once

#include <string>
#include <vector>

#include "glflow/config.hpp"

namespace glflow {

// One acceptance-style verdict: a named check, its outcome, and the measured
// numbers that justify it (human-readable, one line).
struct CriterionResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuitePaths {
  std::string configs_dir;  // root holding one subdirectory per suite
  std::string out_dir;      // run outputs land here, one subdirectory per run
};

// Canonical suite names in evaluation order.
const std::vector<std::string>& suite_names();

// Executes the named suite's canonical runs (finished outputs with a matching
// config hash are reused) and evaluates its criteria.
std::vector<CriterionResult> run_suite(const std::string& name,
                                       const SuitePaths& paths);

// Re-derives diagnostics from a finished run directory (snapshots plus
// report.csv): per-snapshot energy, weighted-energy curves when the run
// streamed the space-time kernel, track displacement, filament radii.
// Writes <run_dir>/analyze.csv and returns its path.
std::string analyze_run(const std::string& run_dir);

}  // namespace glflow
