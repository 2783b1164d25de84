#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glflow/checkpoint.hpp"
#include "glflow/config.hpp"
#include "glflow/field.hpp"

namespace glflow {

ComplexField build_initial_field(const RunConfig& cfg);

// Scheduled stop: the evolution lands on t exactly and the masked actions
// fire in order diagnostics, snapshot, checkpoint.
struct Stop {
  double t;
  unsigned mask;  // kDiag | kSnap | kCkpt
};
constexpr unsigned kDiag = 1, kSnap = 2, kCkpt = 4;

std::vector<Stop> build_stops(const RunConfig& cfg);

struct RunResult {
  std::uint64_t config_hash = 0;
  double t_final = 0.0;
  std::string report_path;
  std::string summary_path;
};

// Executes the run into out_dir: report.csv (deterministic, append-only),
// summary.txt (human-readable, carries wall-clock), snapshots/, and an
// optional checkpoint.  Identical config => byte-identical report.csv,
// regardless of thread count.
RunResult execute_run(const RunConfig& cfg, const std::string& out_dir);

// Continues a checkpointed run.  The config must hash-match the checkpoint;
// the report is truncated back to the checkpointed byte offset, so the
// finished file is byte-identical to an uninterrupted run's.
RunResult resume_run(const RunConfig& cfg, const std::string& checkpoint_path,
                     const std::string& out_dir);

}  // namespace glflow
