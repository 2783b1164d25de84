// Command-line front end: run one configuration, run a named suite, re-run
// analysis on a finished run directory, or print the header of a snapshot or
// checkpoint file.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "glflow/analysis.hpp"
#include "glflow/checkpoint.hpp"
#include "glflow/config.hpp"
#include "glflow/reduce.hpp"
#include "glflow/runner.hpp"
#include "glflow/snapshot.hpp"

namespace {

void apply_threads(int threads) {
  if (threads <= 0) {
    const char* env = std::getenv("GLFLOW_THREADS");
    if (env) threads = std::atoi(env);
  }
  if (threads > 0) glflow::set_worker_threads(threads);
}

int cmd_run(const std::string& config_path, std::string out_dir,
            long long seed_override, const std::string& resume_path) {
  glflow::RunConfig cfg = glflow::load_run_config(config_path);
  if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
  if (out_dir.empty()) out_dir = cfg.output_dir;
  if (out_dir.empty())
    throw std::invalid_argument(
        "no output directory: pass --out or set output.dir in the config");
  glflow::RunResult res =
      resume_path.empty()
          ? glflow::execute_run(cfg, out_dir)
          : glflow::resume_run(cfg, resume_path, out_dir);
  std::printf("run finished: t = %.17g, report %s\n", res.t_final,
              res.report_path.c_str());
  return 0;
}

int cmd_suite(const std::string& name, const std::string& configs_dir,
              const std::string& out_dir) {
  glflow::SuitePaths paths{configs_dir, out_dir};
  std::vector<glflow::CriterionResult> results =
      glflow::run_suite(name, paths);
  bool all = true;
  for (const auto& r : results) {
    std::printf("%s %-28s %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.detail.c_str());
    all = all && r.pass;
  }
  return all ? 0 : 1;
}

int cmd_analyze(const std::string& run_dir) {
  std::string path = glflow::analyze_run(run_dir);
  std::printf("analysis written to %s\n", path.c_str());
  return 0;
}

std::string read_magic(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open '" + path + "'");
  char magic[8] = {0};
  f.read(magic, 8);
  return std::string(magic, magic + f.gcount());
}

int cmd_inspect(const std::string& path) {
  std::string magic = read_magic(path);
  if (magic == "GLFLOW01") {
    glflow::ComplexField u = glflow::read_snapshot(path);
    const glflow::GridSpec& g = u.grid;
    std::printf("snapshot %s\n", path.c_str());
    std::printf("  dim      %d\n", g.dim);
    std::printf("  n        %d", g.n[0]);
    for (int a = 1; a < g.dim; ++a) std::printf(" x %d", g.n[a]);
    std::printf("\n");
    std::printf("  h        %.17g\n", g.h);
    std::printf("  epsilon  %.17g\n", g.epsilon);
    std::printf("  t        %.17g\n", u.t);
    std::printf("  cells    %zu\n", u.size());
    return 0;
  }
  if (magic == "GLCKPT01") {
    glflow::Checkpoint ck = glflow::read_checkpoint(path);
    const glflow::GridSpec& g = ck.field.grid;
    std::printf("checkpoint %s\n", path.c_str());
    std::printf("  config hash    %016llx\n",
                static_cast<unsigned long long>(ck.config_hash));
    std::printf("  next stop      %llu\n",
                static_cast<unsigned long long>(ck.next_stop));
    std::printf("  report offset  %llu\n",
                static_cast<unsigned long long>(ck.report_offset));
    std::printf("  field          %d-d, n = %d, h = %.17g, eps = %.17g, "
                "t = %.17g\n",
                g.dim, g.n[0], g.h, g.epsilon, ck.field.t);
    return 0;
  }
  throw std::invalid_argument("'" + path +
                              "' is neither a snapshot nor a checkpoint");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"periodic Ginzburg-Landau flow laboratory"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads,
                 "worker threads (env GLFLOW_THREADS as fallback)");

  auto* run = app.add_subcommand("run", "execute one configuration");
  std::string run_config, run_out, run_resume;
  long long run_seed = -1;
  run->add_option("--config", run_config, "configuration file")->required();
  run->add_option("--out", run_out, "output directory");
  run->add_option("--seed", run_seed, "override the config seed");
  run->add_option("--resume", run_resume, "checkpoint file to continue from");

  auto* suite = app.add_subcommand("suite", "run a canonical suite");
  std::string suite_name, suite_configs = "configs", suite_out = "suite_out";
  std::string known;
  for (const std::string& n : glflow::suite_names()) known += " " + n;
  suite->add_option("name", suite_name, "one of:" + known)->required();
  suite->add_option("--configs", suite_configs, "suite config root");
  suite->add_option("--out", suite_out, "output root for suite runs");

  auto* analyze =
      app.add_subcommand("analyze", "re-run diagnostics on a finished run");
  std::string analyze_dir;
  analyze->add_option("--run", analyze_dir, "run directory")->required();

  auto* inspect = app.add_subcommand("inspect", "print a file header");
  std::string inspect_path;
  inspect->add_option("path", inspect_path, "snapshot or checkpoint")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    apply_threads(threads);
    if (run->parsed()) return cmd_run(run_config, run_out, run_seed, run_resume);
    if (suite->parsed()) return cmd_suite(suite_name, suite_configs, suite_out);
    if (analyze->parsed()) return cmd_analyze(analyze_dir);
    if (inspect->parsed()) return cmd_inspect(inspect_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
