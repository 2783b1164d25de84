#include "glflow/vortexology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "glflow/quadrature.hpp"

namespace glflow {

namespace {

double warg(cplx b, cplx a) { return std::arg(b * std::conj(a)); }

int wrap(int i, int n) { return ((i % n) + n) % n; }

// Winding of the 2-d plaquette anchored at (i, j), +z orientation.
int winding2d(const ComplexField& u, int i, int j) {
  int n0 = u.grid.n[0], n1 = u.grid.n[1];
  int ip = wrap(i + 1, n0), jp = wrap(j + 1, n1);
  double s = warg(u.at(ip, j), u.at(i, j)) + warg(u.at(ip, jp), u.at(ip, j)) +
             warg(u.at(i, jp), u.at(ip, jp)) + warg(u.at(i, j), u.at(i, jp));
  return static_cast<int>(std::lround(s / (2.0 * M_PI)));
}

// Zero of the bilinear interpolant of (Re u, Im u) on plaquette (i, j),
// in local coordinates; falls back to the center for degenerate cells.
std::array<double, 2> bilinear_zero(const ComplexField& u, int i, int j) {
  int n0 = u.grid.n[0], n1 = u.grid.n[1];
  cplx f00 = u.at(i, j), f10 = u.at(wrap(i + 1, n0), j);
  cplx f01 = u.at(i, wrap(j + 1, n1)),
       f11 = u.at(wrap(i + 1, n0), wrap(j + 1, n1));
  cplx A = f00, B = f10 - f00, C = f01 - f00, D = f11 - f10 - f01 + f00;
  double a = A.real(), b = B.real(), c = C.real(), d = D.real();
  double e = A.imag(), f = B.imag(), gg = C.imag(), hh = D.imag();
  // Eliminate eta: (e + f x)(c + d x) - (g + h x)(a + b x) = 0.
  double q2 = f * d - hh * b;
  double q1 = e * d + f * c - gg * b - hh * a;
  double q0 = e * c - gg * a;
  std::array<double, 2> best{0.5, 0.5};
  double best_score = std::numeric_limits<double>::infinity();
  auto consider = [&](double x) {
    if (!(x > -0.25 && x < 1.25)) return;
    double den = c + d * x;
    double y;
    if (std::fabs(den) > 1e-14) {
      y = -(a + b * x) / den;
    } else {
      double den2 = gg + hh * x;
      if (std::fabs(den2) < 1e-14) return;
      y = -(e + f * x) / den2;
    }
    if (!(y > -0.25 && y < 1.25)) return;
    double score = std::fabs(x - 0.5) + std::fabs(y - 0.5);
    if (score < best_score) {
      best_score = score;
      best = {std::clamp(x, 0.0, 1.0), std::clamp(y, 0.0, 1.0)};
    }
  };
  if (std::fabs(q2) < 1e-14 * (std::fabs(q1) + std::fabs(q0))) {
    if (std::fabs(q1) > 0) consider(-q0 / q1);
  } else {
    double disc = q1 * q1 - 4.0 * q2 * q0;
    if (disc >= 0) {
      double sq = std::sqrt(disc);
      consider((-q1 + sq) / (2.0 * q2));
      consider((-q1 - sq) / (2.0 * q2));
    }
  }
  return best;
}

}  // namespace

std::vector<int> plaquette_windings(const ComplexField& u) {
  if (u.grid.dim != 2)
    throw std::invalid_argument("plaquette_windings: 2-d fields only");
  std::vector<int> w(u.grid.cells(), 0);
  for (int i = 0; i < u.grid.n[0]; ++i)
    for (int j = 0; j < u.grid.n[1]; ++j)
      w[u.index(i, j)] = winding2d(u, i, j);
  return w;
}

double jacobian_ball_integral(const ComplexField& u,
                              std::array<double, 2> center, double radius) {
  std::vector<int> w = plaquette_windings(u);
  const GridSpec& g = u.grid;
  long total = 0;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j) {
      if (w[u.index(i, j)] == 0) continue;
      double pc[2] = {(i + 0.5) * g.h, (j + 0.5) * g.h};
      if (min_image_dist2(g, pc, center.data()) <= radius * radius)
        total += w[u.index(i, j)];
    }
  return M_PI * static_cast<double>(total);
}

double jacobian_pairing(const ComplexField& u,
                        const std::function<double(double, double)>& phi) {
  std::vector<int> w = plaquette_windings(u);
  const GridSpec& g = u.grid;
  double s = 0.0;
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j) {
      int ww = w[u.index(i, j)];
      if (ww != 0) s += M_PI * ww * phi((i + 0.5) * g.h, (j + 0.5) * g.h);
    }
  return s;
}

ConcentrationCheck jacobian_concentration_check(
    const ComplexField& u, const std::function<double(double, double)>& phi,
    const std::vector<std::array<double, 2>>& centers,
    const std::vector<int>& degrees) {
  if (centers.size() != degrees.size())
    throw std::invalid_argument(
        "jacobian_concentration_check: centers/degrees size mismatch");
  ConcentrationCheck r{};
  r.measured = jacobian_pairing(u, phi);
  r.expected = 0.0;
  for (std::size_t i = 0; i < centers.size(); ++i)
    r.expected += M_PI * degrees[i] * phi(centers[i][0], centers[i][1]);
  r.abs_err = std::fabs(r.measured - r.expected);
  return r;
}

std::vector<VortexRecord> detect_vortices(
    const ComplexField& u, const std::vector<double>* energy_density,
    std::vector<std::string>* log, double r_mass) {
  if (u.grid.dim != 2)
    throw std::invalid_argument("detect_vortices: 2-d fields only");
  const GridSpec& g = u.grid;
  std::vector<int> w = plaquette_windings(u);

  // Connected clusters of nonzero-winding plaquettes (8-adjacency, periodic).
  std::vector<int> cluster(g.cells(), -1);
  int nclusters = 0;
  std::vector<std::vector<std::size_t>> members;
  for (std::size_t s = 0; s < g.cells(); ++s) {
    if (w[s] == 0 || cluster[s] >= 0) continue;
    std::vector<std::size_t> stack{s};
    cluster[s] = nclusters;
    members.emplace_back();
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      members[nclusters].push_back(cur);
      int ci = static_cast<int>(cur) / g.n[1],
          cj = static_cast<int>(cur) % g.n[1];
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          std::size_t nb = static_cast<std::size_t>(wrap(ci + di, g.n[0])) *
                               g.n[1] +
                           wrap(cj + dj, g.n[1]);
          if (w[nb] != 0 && cluster[nb] < 0) {
            cluster[nb] = nclusters;
            stack.push_back(nb);
          }
        }
    }
    ++nclusters;
  }

  struct Raw {
    double x, y;
    int degree;
    double min_mod;
    bool merged = false;
  };
  std::vector<Raw> raws;
  for (int c = 0; c < nclusters; ++c) {
    double sx = 0, sy = 0, sw = 0;
    int deg = 0;
    double mm = std::numeric_limits<double>::infinity();
    // Positions are averaged in min-image coordinates relative to the first
    // member so clusters straddling the seam stay coherent.
    int i0 = static_cast<int>(members[c][0]) / g.n[1];
    int j0 = static_cast<int>(members[c][0]) % g.n[1];
    double bx = (i0 + 0.5) * g.h, by = (j0 + 0.5) * g.h;
    for (std::size_t s : members[c]) {
      int i = static_cast<int>(s) / g.n[1], j = static_cast<int>(s) % g.n[1];
      deg += w[s];
      auto z = bilinear_zero(u, i, j);
      double px = (i + z[0]) * g.h, py = (j + z[1]) * g.h;
      double wgt = std::abs(w[s]);
      sx += wgt * min_image(px - bx, g.length(0));
      sy += wgt * min_image(py - by, g.length(1));
      sw += wgt;
      for (int di = 0; di <= 1; ++di)
        for (int dj = 0; dj <= 1; ++dj)
          mm = std::min(mm,
                        std::abs(u.at(wrap(i + di, g.n[0]), wrap(j + dj, g.n[1]))));
    }
    if (sw == 0) continue;
    double x = bx + sx / sw, y = by + sy / sw;
    x -= g.length(0) * std::floor(x / g.length(0));
    y -= g.length(1) * std::floor(y / g.length(1));
    raws.push_back({x, y, deg, mm});
  }

  // Merge clusters closer than 4 epsilon.
  const double merge2 = 16.0 * g.epsilon * g.epsilon;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t p = 0; p < raws.size() && !changed; ++p)
      for (std::size_t q = p + 1; q < raws.size() && !changed; ++q) {
        double a[2] = {raws[p].x, raws[p].y}, b[2] = {raws[q].x, raws[q].y};
        if (min_image_dist2(g, a, b) < merge2) {
          if (log)
            log->push_back("detect_vortices: merging clusters at (" +
                           std::to_string(raws[p].x) + "," +
                           std::to_string(raws[p].y) + ") and (" +
                           std::to_string(raws[q].x) + "," +
                           std::to_string(raws[q].y) + ") closer than 4 eps");
          double wp = std::max(1, std::abs(raws[p].degree));
          double wq = std::max(1, std::abs(raws[q].degree));
          double dx = min_image(raws[q].x - raws[p].x, g.length(0));
          double dy = min_image(raws[q].y - raws[p].y, g.length(1));
          raws[p].x += dx * wq / (wp + wq);
          raws[p].y += dy * wq / (wp + wq);
          raws[p].degree += raws[q].degree;
          raws[p].min_mod = std::min(raws[p].min_mod, raws[q].min_mod);
          raws[p].merged = true;
          raws.erase(raws.begin() + q);
          changed = true;
        }
      }
  }

  std::sort(raws.begin(), raws.end(), [](const Raw& a, const Raw& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });

  std::vector<VortexRecord> out;
  const double leps = log_inv_eps(g.epsilon);
  for (const Raw& r : raws) {
    VortexRecord rec;
    rec.pos = {r.x, r.y};
    rec.degree = r.degree;
    rec.min_mod = r.min_mod;
    rec.merged = r.merged;
    rec.mass = std::numeric_limits<double>::quiet_NaN();
    if (energy_density) {
      double c[2] = {r.x, r.y};
      double rm = r_mass > 0.0 ? r_mass : 10.0 * g.epsilon;
      double e_ball = ball_sum(g, *energy_density, c, rm);
      // Discrete ball measure for an exact cancellation on flat background.
      std::vector<double> ones(energy_density->size(), 1.0);
      double area = ball_sum(g, ones, c, rm);
      double med =
          annulus_median(g, *energy_density, c, 2.0 * rm, 3.0 * rm);
      rec.mass = (e_ball - med * area) / leps;
    }
    out.push_back(rec);
  }
  return out;
}

VortexTracker::VortexTracker(const GridSpec& g, double gate)
    : g_(g), gate_(gate > 0 ? gate : 3.0 * g.h) {}

void VortexTracker::observe(double t, const std::vector<VortexRecord>& recs) {
  std::vector<bool> taken(recs.size(), false);
  // Extend existing open tracks first, oldest first: greedy NN under gate.
  for (auto& tr : tracks_) {
    if (!tr.open) continue;
    const TrackPoint& last = tr.pts.back();
    double best = gate_ * gate_;
    int pick = -1;
    for (std::size_t r = 0; r < recs.size(); ++r) {
      if (taken[r]) continue;
      if (recs[r].degree != tr.degree) continue;
      double p[2] = {last.pos[0], last.pos[1]};
      double q[2] = {recs[r].pos[0], recs[r].pos[1]};
      double d2 = min_image_dist2(g_, p, q);
      if (d2 <= best) {
        best = d2;
        pick = static_cast<int>(r);
      }
    }
    if (pick >= 0) {
      taken[pick] = true;
      tr.pts.push_back({t, recs[pick].pos, recs[pick].mass,
                        recs[pick].min_mod});
    } else {
      tr.open = false;
      log_.push_back("track " + std::to_string(tr.id) + " ended at t = " +
                     std::to_string(t));
    }
  }
  for (std::size_t r = 0; r < recs.size(); ++r) {
    if (taken[r]) continue;
    VortexTrack tr;
    tr.id = static_cast<int>(tracks_.size());
    tr.degree = recs[r].degree;
    tr.open = true;
    tr.pts.push_back({t, recs[r].pos, recs[r].mass, recs[r].min_mod});
    if (!tracks_.empty() && tr.pts.front().t > tracks_.front().pts.front().t)
      log_.push_back("track " + std::to_string(tr.id) +
                     " born mid-run at t = " + std::to_string(t));
    tracks_.push_back(std::move(tr));
  }
}

void VortexTracker::restore(std::vector<VortexTrack> tracks) {
  for (std::size_t i = 0; i < tracks.size(); ++i)
    if (tracks[i].id != static_cast<int>(i) || tracks[i].pts.empty())
      throw std::invalid_argument(
          "VortexTracker::restore: tracks must be dense, id-ordered, and "
          "non-empty");
  tracks_ = std::move(tracks);
  log_.clear();
}

double Filament::length() const {
  if (verts.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < verts.size(); ++i) {
    double d = 0;
    for (int a = 0; a < 3; ++a) {
      double x = verts[i + 1][a] - verts[i][a];
      d += x * x;
    }
    s += std::sqrt(d);
  }
  if (closed) {
    double d = 0;
    for (int a = 0; a < 3; ++a) {
      double x = verts.front()[a] - verts.back()[a];
      d += x * x;
    }
    s += std::sqrt(d);
  }
  return s;
}

namespace {

// Face winding: face perpendicular to `axis` anchored at grid point
// (i, j, k), oriented along +axis.
int face_winding(const ComplexField& u, int axis, int i, int j, int k) {
  const GridSpec& g = u.grid;
  auto at = [&](int a, int b, int c) {
    return u.at(wrap(a, g.n[0]), wrap(b, g.n[1]), wrap(c, g.n[2]));
  };
  cplx p0, p1, p2, p3;
  if (axis == 0) {
    p0 = at(i, j, k), p1 = at(i, j + 1, k), p2 = at(i, j + 1, k + 1),
    p3 = at(i, j, k + 1);
  } else if (axis == 1) {
    p0 = at(i, j, k), p1 = at(i, j, k + 1), p2 = at(i + 1, j, k + 1),
    p3 = at(i + 1, j, k);
  } else {
    p0 = at(i, j, k), p1 = at(i + 1, j, k), p2 = at(i + 1, j + 1, k),
    p3 = at(i, j + 1, k);
  }
  double s = warg(p1, p0) + warg(p2, p1) + warg(p3, p2) + warg(p0, p3);
  return static_cast<int>(std::lround(s / (2.0 * M_PI)));
}

}  // namespace

std::vector<Filament> extract_filaments(const ComplexField& u) {
  if (u.grid.dim != 3)
    throw std::invalid_argument("extract_filaments: 3-d fields only");
  const GridSpec& g = u.grid;
  const std::size_t nc = g.cells();
  std::array<std::vector<int>, 3> W;
  for (int a = 0; a < 3; ++a) W[a].assign(nc, 0);
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        std::size_t idx = u.index(i, j, k);
        for (int a = 0; a < 3; ++a) W[a][idx] = face_winding(u, a, i, j, k);
      }

  std::array<std::vector<bool>, 3> used;
  for (int a = 0; a < 3; ++a) used[a].assign(nc, false);

  auto face_index = [&](int /*a*/, std::array<int, 3> p) {
    return (static_cast<std::size_t>(wrap(p[0], g.n[0])) * g.n[1] +
            wrap(p[1], g.n[1])) *
               g.n[2] +
           wrap(p[2], g.n[2]);
  };

  std::vector<Filament> out;
  for (int a0 = 0; a0 < 3; ++a0)
    for (std::size_t s0 = 0; s0 < nc; ++s0) {
      if (W[a0][s0] == 0 || used[a0][s0]) continue;
      // Strand crosses this face along sign(W) * axis.
      int i = static_cast<int>(s0 / (static_cast<std::size_t>(g.n[1]) * g.n[2]));
      int j = static_cast<int>((s0 / g.n[2]) % g.n[1]);
      int k = static_cast<int>(s0 % g.n[2]);
      int dir = W[a0][s0] > 0 ? 1 : -1;
      std::array<int, 3> cell{i, j, k};
      if (dir < 0) cell[a0] -= 1;  // enters the cell behind the face
      const int start_axis = a0;
      const std::size_t start_face = s0;
      used[a0][s0] = true;

      Filament fil;
      // Unwrapped coordinates accumulate physical steps from the first cell.
      std::array<double, 3> pos{(cell[0] + 0.5) * g.h, (cell[1] + 0.5) * g.h,
                                (cell[2] + 0.5) * g.h};
      std::size_t guard = 0;
      while (guard++ < 6 * nc) {
        fil.verts.push_back(pos);
        // Outward fluxes of `cell`; exit = unused face with flux > 0.
        int exit_axis = -1, exit_sign = 0;
        std::size_t exit_face = 0;
        int nexits = 0;
        for (int a = 0; a < 3; ++a) {
          std::array<int, 3> plus = cell;
          plus[a] += 1;
          std::size_t f_plus = face_index(a, plus);
          std::size_t f_minus = face_index(a, cell);
          if (W[a][f_plus] > 0 && !used[a][f_plus]) {
            ++nexits;
            if (exit_axis < 0) {
              exit_axis = a;
              exit_sign = 1;
              exit_face = f_plus;
            }
          }
          if (W[a][f_minus] < 0 && !used[a][f_minus]) {
            ++nexits;
            if (exit_axis < 0) {
              exit_axis = a;
              exit_sign = -1;
              exit_face = f_minus;
            }
          }
        }
        // Closing the loop: the start face bounds this cell as an exit.
        {
          std::array<int, 3> plus = cell;
          plus[start_axis] += 1;
          bool closes =
              (W[start_axis][start_face] > 0 &&
               face_index(start_axis, plus) == start_face) ||
              (W[start_axis][start_face] < 0 &&
               face_index(start_axis, cell) == start_face);
          if (closes) {
            fil.closed = true;
            break;
          }
        }
        if (exit_axis < 0) {
          fil.degraded = true;  // dead end: conservation broken by |W| >= 2
          break;
        }
        if (nexits > 1) fil.degraded = true;
        used[exit_axis][exit_face] = true;
        cell[exit_axis] += exit_sign;
        pos[exit_axis] += exit_sign * g.h;
      }
      if (fil.verts.size() >= 3) {
        // One smoothing pass knocks the cell-center staircase down.
        std::vector<std::array<double, 3>> sm = fil.verts;
        std::size_t n = fil.verts.size();
        for (std::size_t v = 0; v < n; ++v) {
          if (!fil.closed && (v == 0 || v == n - 1)) continue;
          std::size_t vm = (v + n - 1) % n, vp = (v + 1) % n;
          for (int a = 0; a < 3; ++a)
            sm[v][a] = 0.25 * fil.verts[vm][a] + 0.5 * fil.verts[v][a] +
                       0.25 * fil.verts[vp][a];
        }
        fil.verts = std::move(sm);
      }
      out.push_back(std::move(fil));
    }
  return out;
}

double clearing_out_eta(const GridSpec& g, const std::vector<double>& energy,
                        std::array<double, 3> x_T, double R,
                        double lambda_cfg) {
  if (!(R > 0)) throw std::invalid_argument("clearing_out_eta: R must be > 0");
  if (lambda_cfg * R > 0.5 * g.min_length())
    throw std::invalid_argument(
        "clearing_out_eta: lambda * R exceeds half the domain");
  double e = ball_sum(g, energy, x_T.data(), lambda_cfg * R);
  return std::pow(R, 2 - g.dim) * e / log_inv_eps(g.epsilon);
}

ClearingOutResult clearing_out_verdict(
    const GridSpec& g, double eta_tilde, double eta_cfg, double sigma,
    double R, const std::vector<std::pair<double, double>>& min_mod_samples) {
  if (!(R >= std::sqrt(2.0 * g.epsilon) * (1.0 - 1e-12) && R <= 1.0 + 1e-12))
    throw std::invalid_argument(
        "clearing_out_verdict: R must lie in [sqrt(2 eps), 1], got " +
        std::to_string(R));
  ClearingOutResult res{};
  res.eta_tilde = eta_tilde;
  res.threshold = 0.5 * eta_cfg;
  res.min_mod = std::numeric_limits<double>::quiet_NaN();
  double t0 = 2.0 * g.epsilon;
  if (g.dim == 3 && eta_tilde > 0)
    t0 = std::max(t0, std::pow(2.0 * eta_tilde / eta_cfg, 2.0) * R * R);
  res.t0 = t0;
  if (eta_tilde > res.threshold) {
    res.verdict = ClearingVerdict::kNotApplicable;
    return res;
  }
  double mm = std::numeric_limits<double>::infinity();
  bool covered = false;
  for (const auto& [dt, m] : min_mod_samples) {
    if (dt >= t0 - 1e-12 && dt <= R * R + 1e-12) {
      covered = true;
      mm = std::min(mm, m);
    }
  }
  if (!covered)
    throw std::invalid_argument(
        "clearing_out_verdict: no modulus samples inside [T0, R^2] = [" +
        std::to_string(t0) + ", " + std::to_string(R * R) + "]");
  res.min_mod = mm;
  res.verdict =
      mm >= 1.0 - sigma ? ClearingVerdict::kPass : ClearingVerdict::kFail;
  return res;
}

}  // namespace glflow
