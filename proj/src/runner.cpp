#include "glflow/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <stdexcept>

#include "glflow/energy.hpp"
#include "glflow/fft.hpp"
#include "glflow/mcf.hpp"
#include "glflow/reduce.hpp"
#include "glflow/report.hpp"
#include "glflow/seeding.hpp"
#include "glflow/snapshot.hpp"
#include "glflow/stepper.hpp"
#include "glflow/testfields.hpp"
#include "glflow/vortexology.hpp"

namespace glflow {

namespace {

namespace fs = std::filesystem;

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string snapshot_name(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snap_%012.6f.glf", t);
  return buf;
}

std::string now_string() {
  std::time_t t = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%d %H:%M:%S", std::gmtime(&t));
  return buf;
}

struct BalanceState {
  bool have_prev = false;
  double prev_t = 0.0;
  // per test function: localized energy and its modeled rate
  std::array<double, 2> prev_mu = {0, 0};
  std::array<double, 2> prev_rhs = {0, 0};
};

StepperConfig stepper_config(const RunConfig& cfg) {
  StepperConfig sc;
  sc.scheme = cfg.scheme == "fd" ? Scheme::kExplicitFD : Scheme::kSpectralIF;
  sc.order = cfg.order;
  sc.dt = cfg.dt;
  return sc;
}

}  // namespace

ComplexField build_initial_field(const RunConfig& cfg) {
  GridSpec g = cfg.make_grid_spec();
  const std::string& k = cfg.init_kind;
  if (k == "constant") return seed_constant(g, {cfg.value_re, cfg.value_im});
  if (k == "vacuum") return seed_vacuum(g);
  if (k == "plane_wave") return seed_plane_wave(g, cfg.mode);
  if (k == "dipole") {
    double cx = 0.5 * g.length(0), cy = 0.5 * g.length(1);
    std::vector<PointVortex> vs = {
        {{cx - 0.5 * cfg.separation, cy}, +1},
        {{cx + 0.5 * cfg.separation, cy}, -1},
    };
    return seed_vortex_configuration(g, vs);
  }
  if (k == "vortices") {
    std::vector<PointVortex> vs;
    for (const auto& v : cfg.vortices)
      vs.push_back({{v[0], v[1]}, static_cast<int>(v[2])});
    return seed_vortex_configuration(g, vs);
  }
  if (k == "random_phase")
    return seed_random_phase(g, cfg.amplitude, cfg.corr_length, cfg.mode_cap,
                             cfg.seed);
  if (k == "ring") {
    std::array<double, 3> c = cfg.center;
    if (!cfg.center_set)
      c = {0.5 * g.length(0), 0.5 * g.length(1), 0.5 * g.length(2)};
    return seed_vortex_ring(g, cfg.radius, c);
  }
  throw std::invalid_argument("build_initial_field: unhandled kind " + k);
}

std::vector<Stop> build_stops(const RunConfig& cfg) {
  std::vector<Stop> raw;
  raw.push_back({0.0, kDiag});
  raw.push_back({cfg.t_end, kDiag});
  if (cfg.diag_every > 0)
    for (int k = 1; k * cfg.diag_every < cfg.t_end; ++k)
      raw.push_back({k * cfg.diag_every, kDiag});
  for (double t : cfg.snapshot_times)
    if (t >= 0 && t <= cfg.t_end) raw.push_back({t, kSnap});
  if (cfg.snapshot_every > 0)
    for (int k = 1; k * cfg.snapshot_every <= cfg.t_end * (1 + 1e-12); ++k)
      raw.push_back({std::min(k * cfg.snapshot_every, cfg.t_end), kSnap});
  if (cfg.checkpoint_at > 0 && cfg.checkpoint_at <= cfg.t_end)
    raw.push_back({cfg.checkpoint_at, kCkpt});

  std::sort(raw.begin(), raw.end(),
            [](const Stop& a, const Stop& b) { return a.t < b.t; });
  const double tol = 1e-9 * std::max(1.0, cfg.t_end);
  std::vector<Stop> merged;
  for (const Stop& s : raw) {
    if (!merged.empty() && s.t - merged.back().t <= tol)
      merged.back().mask |= s.mask;
    else
      merged.push_back(s);
  }
  return merged;
}

namespace {

struct RunContext {
  const RunConfig& cfg;
  GridSpec g;
  ReportWriter& report;
  std::ofstream& summary;
  std::string out_dir;
  std::uint64_t hash;

  ScalarTestField chi0 = make_unit_chi();
  ScalarTestField chi1;
  BalanceState balance;
  double sup_mod0 = -1.0;
  VortexTracker tracker;

  RunContext(const RunConfig& c, const GridSpec& gs, ReportWriter& r,
             std::ofstream& s, std::string out, std::uint64_t h)
      : cfg(c),
        g(gs),
        report(r),
        summary(s),
        out_dir(std::move(out)),
        hash(h),
        chi1(make_cos_bump(gs, 4.0)),
        tracker(gs, c.track_gate) {}
};

void diag_at_stop(RunContext& rc, ComplexField& u) {
  const RunConfig& cfg = rc.cfg;
  auto num = [](double v) { return ReportWriter::num(v); };
  const double t = u.t;

  bool xi_live = cfg.diag_xi && t < cfg.xi_tstar - 1e-12;
  bool need_rhs = cfg.diag_balance || cfg.diag_bounds || xi_live;
  ComplexField w;
  if (need_rhs) w = pde_rhs(u);

  if (cfg.diag_energy) {
    double E = total_energy(u);
    rc.report.row(t, "energy", {num(E), num(sup_mod(u))});
  }

  if (cfg.diag_bounds) {
    std::array<ComplexField, 3> grad;
    spectral_for(rc.g).gradient(u, grad);
    double sg2 = 0.0, sw2 = 0.0, su = sup_mod(u);
    for (int a = 0; a < rc.g.dim; ++a)
      for (const cplx& z : grad[a].a) sg2 = std::max(sg2, std::norm(z));
    for (const cplx& z : w.a) sw2 = std::max(sw2, std::norm(z));
    double e = rc.g.epsilon;
    rc.report.row(t, "bounds",
                  {num(su), num(e * std::sqrt(sg2)),
                   num(e * e * std::sqrt(sw2))});
    if (t >= e * e && su > 2.0 + 1e-9)
      throw std::runtime_error(
          "pointwise bound violated: sup|u| = " + std::to_string(su) +
          " > 2 at t = " + std::to_string(t));
  }

  if (cfg.diag_supersolution) {
    if (rc.sup_mod0 < 0) {
      rc.sup_mod0 = sup_mod(u);
      rc.report.row(t, "sup_mod0", {num(rc.sup_mod0)});
    }
    SupersolutionCheck sc = supersolution_check(rc.sup_mod0, u);
    rc.report.row(t, "supersolution",
                  {num(sc.bound), num(sc.measured), num(sc.margin),
                   sc.pass ? "1" : "0"});
  }

  if (cfg.diag_balance) {
    std::array<double, 2> mu, rhs;
    mu[0] = chi_measure(u, rc.chi0);
    mu[1] = chi_measure(u, rc.chi1);
    rhs[0] = balance_rhs(u, w, rc.chi0);
    rhs[1] = balance_rhs(u, w, rc.chi1);
    for (int c = 0; c < 2; ++c)
      rc.report.row(t, "balance_sample",
                    {ReportWriter::num(c), num(mu[c]), num(rhs[c])});
    if (rc.balance.have_prev && t > rc.balance.prev_t) {
      double dt = t - rc.balance.prev_t;
      for (int c = 0; c < 2; ++c) {
        double lhs = mu[c] - rc.balance.prev_mu[c];
        double rint = 0.5 * dt * (rhs[c] + rc.balance.prev_rhs[c]);
        double denom = std::max(std::abs(lhs), std::abs(rint));
        double rel = denom > 0 ? std::abs(lhs - rint) / denom : 0.0;
        rc.report.row(t, "balance_residual",
                      {ReportWriter::num(c), num(rel), num(lhs), num(rint)});
      }
    }
    rc.balance.have_prev = true;
    rc.balance.prev_t = t;
    rc.balance.prev_mu = mu;
    rc.balance.prev_rhs = rhs;
  }

  if (cfg.diag_xi) {
    // Space-time kernel diagnostic around (xi_center, xi_tstar): the weighted
    // energy of the starting slice on one side, the streamed kernel integrand
    // on the other.  Periodized kernels keep both sides exact on the torus.
    if (t == 0.0) {
      std::vector<double> e = energy_density(u, GradientMode::kSpectral);
      double lhs = weighted_energy(rc.g, e, cfg.xi_center.data(),
                                   std::sqrt(cfg.xi_tstar), true);
      rc.report.row(t, "xi_lhs", {num(lhs)});
    }
    if (xi_live) {
      std::vector<double> s =
          xi_density(u, w, cfg.xi_center.data(), cfg.xi_tstar);
      std::vector<double> pot = potential_density(u);
      for (std::size_t i = 0; i < s.size(); ++i) s[i] += pot[i];
      double sample = kernel_average(rc.g, s, cfg.xi_center.data(),
                                     cfg.xi_tstar - t, true);
      rc.report.row(t, "xi_sample", {num(sample)});
    }
  }

  if (cfg.diag_vortices) {
    std::vector<double> dens = energy_density(u, GradientMode::kCentralFD);
    std::vector<std::string> log;
    std::vector<VortexRecord> recs =
        detect_vortices(u, &dens, &log, cfg.mass_radius);
    for (const std::string& line : log) rc.summary << "  [detect] " << line << "\n";
    rc.tracker.observe(t, recs);
    rc.report.row(t, "vortex_scan", {ReportWriter::num(int(recs.size()))});
    for (const VortexTrack& tr : rc.tracker.tracks()) {
      if (tr.pts.empty() || tr.pts.back().t != t) continue;
      const TrackPoint& p = tr.pts.back();
      rc.report.row(t, "track",
                    {ReportWriter::num(tr.id), num(p.pos[0]), num(p.pos[1]),
                     ReportWriter::num(tr.degree), num(p.mass),
                     num(p.min_mod)});
    }
  }

  if (cfg.diag_filaments) {
    std::vector<Filament> fils = extract_filaments(u);
    rc.report.row(t, "filament_scan", {ReportWriter::num(int(fils.size()))});
    for (std::size_t i = 0; i < fils.size(); ++i) {
      const Filament& f = fils[i];
      rc.report.row(t, "filament",
                    {ReportWriter::num(int(i)), ReportWriter::num(int(f.verts.size())),
                     num(f.length()), f.closed ? "1" : "0",
                     f.degraded ? "1" : "0"});
      Curve c{f.verts, f.closed};
      RadiusFit fit = fitted_radius(c);
      rc.report.row(t, "filament_radius",
                    {ReportWriter::num(int(i)), num(fit.mean), num(fit.rms_dev),
                     num(fit.center[0]), num(fit.center[1]),
                     num(fit.center[2])});
      for (std::size_t vi = 0; vi < f.verts.size(); ++vi)
        rc.report.row(t, "filament_vert",
                      {ReportWriter::num(int(i)), ReportWriter::num(int(vi)),
                       num(f.verts[vi][0]), num(f.verts[vi][1]),
                       num(f.verts[vi][2])});
    }
  }
}

RunResult drive(const RunConfig& cfg, const std::string& out_dir,
                const Checkpoint* ck) {
  GridSpec g = cfg.make_grid_spec();
  if (cfg.diag_vortices && g.dim != 2)
    throw std::invalid_argument("diag.vortices is 2-d only");
  if (cfg.diag_filaments && g.dim != 3)
    throw std::invalid_argument("diag.filaments is 3-d only");

  fs::create_directories(out_dir);
  fs::create_directories(out_dir + "/snapshots");
  std::string report_path = out_dir + "/report.csv";
  std::string summary_path = out_dir + "/summary.txt";
  std::string ckpt_path = out_dir + "/checkpoint.glc";
  std::uint64_t hash = config_hash(cfg);

  std::vector<Stop> stops = build_stops(cfg);
  std::size_t first = 0;
  ComplexField u;

  std::unique_ptr<ReportWriter> report;
  std::ofstream summary;
  if (ck) {
    if (ck->config_hash != hash)
      throw std::runtime_error(
          "resume: checkpoint was produced by a different configuration "
          "(hash mismatch)");
    if (ck->next_stop > stops.size())
      throw std::runtime_error("resume: checkpoint stop index out of range");
    u = ck->field;
    if (u.grid.dim != g.dim || u.grid.n[0] != g.n[0] || u.grid.h != g.h ||
        u.grid.epsilon != g.epsilon)
      throw std::runtime_error("resume: checkpoint grid differs from config");
    first = static_cast<std::size_t>(ck->next_stop);
    report = std::make_unique<ReportWriter>(report_path, ck->report_offset);
    summary.open(summary_path, std::ios::app);
  } else {
    u = build_initial_field(cfg);
    report = std::make_unique<ReportWriter>(report_path);
    summary.open(summary_path, std::ios::trunc);
  }
  if (!summary)
    throw std::runtime_error("cannot open '" + summary_path + "'");

  RunContext rc(cfg, g, *report, summary, out_dir, hash);

  if (ck) {
    summary << "resumed at " << now_string() << " utc from stop "
            << first << "\n";
    // Rebuild streaming state from the rows the interrupted run wrote.
    std::vector<ReportRow> rows = read_report(report_path);
    double last_scan_t = -1.0;
    std::map<int, VortexTrack> tracks;
    for (const ReportRow& r : rows) {
      if (r.kind == "sup_mod0") {
        rc.sup_mod0 = r.fnum(0);
      } else if (r.kind == "balance_sample") {
        int c = static_cast<int>(r.fnum(0));
        if (c >= 0 && c < 2) {
          rc.balance.have_prev = true;
          rc.balance.prev_t = r.t;
          rc.balance.prev_mu[c] = r.fnum(1);
          rc.balance.prev_rhs[c] = r.fnum(2);
        }
      } else if (r.kind == "vortex_scan") {
        last_scan_t = r.t;
      } else if (r.kind == "track") {
        int id = static_cast<int>(r.fnum(0));
        VortexTrack& tr = tracks[id];
        tr.id = id;
        tr.degree = static_cast<int>(r.fnum(3));
        tr.pts.push_back(
            {r.t, {r.fnum(1), r.fnum(2)}, r.fnum(4), r.fnum(5)});
      }
    }
    if (!tracks.empty()) {
      std::vector<VortexTrack> ordered;
      for (auto& [id, tr] : tracks) {
        tr.open = !tr.pts.empty() && tr.pts.back().t == last_scan_t;
        ordered.push_back(std::move(tr));
      }
      rc.tracker.restore(std::move(ordered));
    }
  } else {
    summary << "run started " << now_string() << " utc\n";
    summary << "config hash " << hex64(hash) << "\n";
    summary << "grid " << g.dim << "-d, n = " << g.n[0] << ", h = " << g.h
            << ", epsilon = " << g.epsilon << "\n";
    summary << "environment: " << fft_backend_version() << ", threads = "
            << worker_threads() << "\n";
    report->row(0.0, "config", {hex64(hash)});
  }

  StepperConfig sc = stepper_config(cfg);
  auto t_start = std::chrono::steady_clock::now();

  for (std::size_t idx = first; idx < stops.size(); ++idx) {
    const Stop& stop = stops[idx];
    evolve_to(u, stop.t, sc, {}, nullptr);
    if (stop.mask & kDiag) diag_at_stop(rc, u);
    if (stop.mask & kSnap) {
      std::string name = snapshot_name(stop.t);
      write_snapshot(out_dir + "/snapshots/" + name, u);
      report->row(stop.t, "snapshot", {name});
    }
    if (stop.mask & kCkpt) {
      report->row(stop.t, "checkpoint", {"checkpoint.glc"});
      Checkpoint c;
      c.config_hash = hash;
      c.next_stop = idx + 1;
      c.report_offset = report->offset();
      c.field = u;
      write_checkpoint(ckpt_path, c);
    }
  }
  report->row(cfg.t_end, "done", {});

  auto t_stop = std::chrono::steady_clock::now();
  double secs =
      std::chrono::duration<double>(t_stop - t_start).count();
  summary << "finished " << now_string() << " utc, wall "
          << ReportWriter::num(secs) << " s, final t = "
          << ReportWriter::num(u.t) << "\n";
  for (const std::string& line : rc.tracker.log())
    summary << "  [track] " << line << "\n";

  RunResult res;
  res.config_hash = hash;
  res.t_final = u.t;
  res.report_path = report_path;
  res.summary_path = summary_path;
  return res;
}

}  // namespace

RunResult execute_run(const RunConfig& cfg, const std::string& out_dir) {
  return drive(cfg, out_dir, nullptr);
}

RunResult resume_run(const RunConfig& cfg, const std::string& checkpoint_path,
                     const std::string& out_dir) {
  Checkpoint ck = read_checkpoint(checkpoint_path);
  return drive(cfg, out_dir, &ck);
}

}  // namespace glflow
