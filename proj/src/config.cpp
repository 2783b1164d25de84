#include "glflow/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace glflow {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    bad("value '" + v + "' for " + key + " is not a number");
  }
}

long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long d = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    bad("value '" + v + "' for " + key + " is not an integer");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  bad("value '" + v + "' for " + key + " is not on/off");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> k = {
      "grid.dim",          "grid.n",
      "grid.length",       "grid.epsilon",
      "init.kind",         "init.value_re",
      "init.value_im",     "init.mode",
      "init.separation",   "init.vortices",
      "init.amplitude",    "init.corr_length",
      "init.mode_cap",     "init.radius",
      "init.center",       "evolve.t_end",
      "evolve.dt",         "evolve.scheme",
      "evolve.order",      "seed",
      "snapshots.times",   "snapshots.every",
      "diag.every",        "diag.energy",
      "diag.vortices",     "diag.filaments",
      "diag.balance",      "diag.supersolution",
      "diag.bounds",       "diag.xi",
      "xi.center",         "xi.tstar",
      "track.gate",        "track.r_mass",
      "checkpoint.at",
      "output.dir",
  };
  return k;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

GridSpec RunConfig::make_grid_spec() const {
  if (n <= 0) bad("grid.n must be positive");
  return make_grid(dim, {n, n, n}, length / n, epsilon);
}

RunConfig parse_run_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      bad("line " + std::to_string(lineno) + " has no '='");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (!known_keys().count(key))
      bad("unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
    if (kv.count(key))
      bad("duplicate key '" + key + "' (line " + std::to_string(lineno) + ")");
    if (val.empty()) bad("key '" + key + "' has an empty value");
    kv[key] = val;
  }

  for (const char* req : {"grid.dim", "grid.n", "grid.length", "grid.epsilon",
                          "init.kind", "evolve.t_end"})
    if (!kv.count(req)) bad(std::string("missing required key '") + req + "'");

  RunConfig c;
  auto has = [&](const char* k) { return kv.count(k) != 0; };
  auto str = [&](const char* k) { return kv.at(k); };

  c.dim = static_cast<int>(to_int("grid.dim", str("grid.dim")));
  c.n = static_cast<int>(to_int("grid.n", str("grid.n")));
  c.length = to_double("grid.length", str("grid.length"));
  c.epsilon = to_double("grid.epsilon", str("grid.epsilon"));

  c.init_kind = str("init.kind");
  static const std::set<std::string> kinds = {
      "constant", "vacuum",       "plane_wave", "dipole",
      "vortices", "random_phase", "ring"};
  if (!kinds.count(c.init_kind)) bad("unknown init.kind '" + c.init_kind + "'");

  if (has("init.value_re"))
    c.value_re = to_double("init.value_re", str("init.value_re"));
  if (has("init.value_im"))
    c.value_im = to_double("init.value_im", str("init.value_im"));
  if (has("init.mode")) {
    auto parts = split(str("init.mode"), ',');
    if (parts.size() < 2 || parts.size() > 3)
      bad("init.mode wants 'mx,my' or 'mx,my,mz'");
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.mode[i] = static_cast<int>(to_int("init.mode", parts[i]));
  }
  if (has("init.separation"))
    c.separation = to_double("init.separation", str("init.separation"));
  if (has("init.vortices")) {
    for (const std::string& item : split(str("init.vortices"), ';')) {
      if (item.empty()) continue;
      auto parts = split(item, ',');
      if (parts.size() != 3) bad("init.vortices entries want 'x,y,degree'");
      c.vortices.push_back({to_double("init.vortices", parts[0]),
                            to_double("init.vortices", parts[1]),
                            to_double("init.vortices", parts[2])});
    }
    if (c.vortices.empty()) bad("init.vortices is empty");
  }
  if (has("init.amplitude"))
    c.amplitude = to_double("init.amplitude", str("init.amplitude"));
  if (has("init.corr_length"))
    c.corr_length = to_double("init.corr_length", str("init.corr_length"));
  if (has("init.mode_cap"))
    c.mode_cap = static_cast<int>(to_int("init.mode_cap", str("init.mode_cap")));
  if (has("init.radius"))
    c.radius = to_double("init.radius", str("init.radius"));
  if (has("init.center")) {
    auto parts = split(str("init.center"), ',');
    if (parts.size() != static_cast<std::size_t>(c.dim))
      bad("init.center wants " + std::to_string(c.dim) + " coordinates");
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.center[i] = to_double("init.center", parts[i]);
    c.center_set = true;
  }

  c.t_end = to_double("evolve.t_end", str("evolve.t_end"));
  if (c.t_end < 0) bad("evolve.t_end must be >= 0");
  if (has("evolve.dt")) c.dt = to_double("evolve.dt", str("evolve.dt"));
  if (has("evolve.scheme")) {
    c.scheme = str("evolve.scheme");
    if (c.scheme != "spectral" && c.scheme != "fd")
      bad("evolve.scheme must be 'spectral' or 'fd'");
  }
  if (has("evolve.order")) {
    c.order = static_cast<int>(to_int("evolve.order", str("evolve.order")));
    if (c.order != 1 && c.order != 2) bad("evolve.order must be 1 or 2");
  }
  if (has("seed"))
    c.seed = static_cast<std::uint64_t>(to_int("seed", str("seed")));

  if (has("snapshots.times")) {
    for (const std::string& item : split(str("snapshots.times"), ','))
      if (!item.empty())
        c.snapshot_times.push_back(to_double("snapshots.times", item));
    std::sort(c.snapshot_times.begin(), c.snapshot_times.end());
  }
  if (has("snapshots.every"))
    c.snapshot_every = to_double("snapshots.every", str("snapshots.every"));
  if (has("diag.every"))
    c.diag_every = to_double("diag.every", str("diag.every"));
  if (has("diag.energy")) c.diag_energy = to_bool("diag.energy", str("diag.energy"));
  if (has("diag.vortices"))
    c.diag_vortices = to_bool("diag.vortices", str("diag.vortices"));
  if (has("diag.filaments"))
    c.diag_filaments = to_bool("diag.filaments", str("diag.filaments"));
  if (has("diag.balance"))
    c.diag_balance = to_bool("diag.balance", str("diag.balance"));
  if (has("diag.supersolution"))
    c.diag_supersolution =
        to_bool("diag.supersolution", str("diag.supersolution"));
  if (has("diag.bounds")) c.diag_bounds = to_bool("diag.bounds", str("diag.bounds"));
  if (has("diag.xi")) c.diag_xi = to_bool("diag.xi", str("diag.xi"));
  if (has("xi.center")) {
    auto parts = split(str("xi.center"), ',');
    if (parts.size() != static_cast<std::size_t>(c.dim))
      bad("xi.center wants " + std::to_string(c.dim) + " coordinates");
    for (std::size_t i = 0; i < parts.size(); ++i)
      c.xi_center[i] = to_double("xi.center", parts[i]);
  }
  if (has("xi.tstar")) c.xi_tstar = to_double("xi.tstar", str("xi.tstar"));
  if (c.diag_xi && !(c.xi_tstar > 0))
    bad("diag.xi needs xi.tstar > 0 (and xi.center)");
  if (c.diag_xi && !has("xi.center")) bad("diag.xi needs xi.center");
  if (has("track.gate")) c.track_gate = to_double("track.gate", str("track.gate"));
  if (has("track.r_mass"))
    c.mass_radius = to_double("track.r_mass", str("track.r_mass"));
  if (has("checkpoint.at"))
    c.checkpoint_at = to_double("checkpoint.at", str("checkpoint.at"));
  if (has("output.dir")) c.output_dir = str("output.dir");

  // Kind-specific requirements.
  if (c.init_kind == "plane_wave" && !has("init.mode"))
    bad("plane_wave needs init.mode");
  if (c.init_kind == "dipole" && !(c.separation > 0))
    bad("dipole needs init.separation > 0");
  if (c.init_kind == "vortices" && c.vortices.empty())
    bad("vortices needs init.vortices");
  if (c.init_kind == "random_phase" &&
      !(c.amplitude > 0 && c.corr_length > 0))
    bad("random_phase needs init.amplitude and init.corr_length");
  if (c.init_kind == "ring" && !(c.radius > 0)) bad("ring needs init.radius");
  if (c.init_kind == "ring" && c.dim != 3) bad("ring is 3-d only");
  if ((c.init_kind == "dipole" || c.init_kind == "vortices") && c.dim != 2)
    bad(c.init_kind + " is 2-d only");

  c.make_grid_spec();  // validate the geometry now, not at run time
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) bad("cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

std::string canonical_text(const RunConfig& c) {
  std::ostringstream o;
  o << "grid.dim=" << c.dim << "\n";
  o << "grid.n=" << c.n << "\n";
  o << "grid.length=" << fmt_double(c.length) << "\n";
  o << "grid.epsilon=" << fmt_double(c.epsilon) << "\n";
  o << "init.kind=" << c.init_kind << "\n";
  if (c.init_kind == "constant")
    o << "init.value=" << fmt_double(c.value_re) << ","
      << fmt_double(c.value_im) << "\n";
  if (c.init_kind == "plane_wave")
    o << "init.mode=" << c.mode[0] << "," << c.mode[1] << "," << c.mode[2]
      << "\n";
  if (c.init_kind == "dipole")
    o << "init.separation=" << fmt_double(c.separation) << "\n";
  if (c.init_kind == "vortices") {
    o << "init.vortices=";
    for (const auto& v : c.vortices)
      o << fmt_double(v[0]) << "," << fmt_double(v[1]) << ","
        << static_cast<int>(v[2]) << ";";
    o << "\n";
  }
  if (c.init_kind == "random_phase")
    o << "init.random=" << fmt_double(c.amplitude) << ","
      << fmt_double(c.corr_length) << "," << c.mode_cap << "\n";
  if (c.init_kind == "ring") {
    o << "init.radius=" << fmt_double(c.radius) << "\n";
    if (c.center_set)
      o << "init.center=" << fmt_double(c.center[0]) << ","
        << fmt_double(c.center[1]) << "," << fmt_double(c.center[2]) << "\n";
  }
  o << "evolve.t_end=" << fmt_double(c.t_end) << "\n";
  o << "evolve.dt=" << fmt_double(c.dt) << "\n";
  o << "evolve.scheme=" << c.scheme << "\n";
  o << "evolve.order=" << c.order << "\n";
  o << "seed=" << c.seed << "\n";
  if (!c.snapshot_times.empty()) {
    o << "snapshots.times=";
    for (double t : c.snapshot_times) o << fmt_double(t) << ",";
    o << "\n";
  }
  o << "snapshots.every=" << fmt_double(c.snapshot_every) << "\n";
  o << "diag.every=" << fmt_double(c.diag_every) << "\n";
  o << "diag.flags=" << c.diag_energy << c.diag_vortices << c.diag_filaments
    << c.diag_balance << c.diag_supersolution << c.diag_bounds << c.diag_xi
    << "\n";
  if (c.diag_xi) {
    o << "xi.center=" << fmt_double(c.xi_center[0]) << ","
      << fmt_double(c.xi_center[1]) << "," << fmt_double(c.xi_center[2])
      << "\n";
    o << "xi.tstar=" << fmt_double(c.xi_tstar) << "\n";
  }
  o << "track.gate=" << fmt_double(c.track_gate) << "\n";
  o << "track.r_mass=" << fmt_double(c.mass_radius) << "\n";
  o << "checkpoint.at=" << fmt_double(c.checkpoint_at) << "\n";
  return o.str();
}

std::uint64_t fnv1a(const void* data, std::size_t n) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace glflow
