#include "glflow/mcf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glflow {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

std::size_t wrap(std::ptrdiff_t i, std::size_t n) {
  std::ptrdiff_t m = i % static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(m < 0 ? m + n : m);
}

double point_segment_dist(const Vec3& p, const Vec3& a, const Vec3& b) {
  Vec3 ab = sub(b, a);
  double len2 = dot(ab, ab);
  double t = len2 > 0 ? std::clamp(dot(sub(p, a), ab) / len2, 0.0, 1.0) : 0.0;
  Vec3 q{a[0] + t * ab[0], a[1] + t * ab[1], a[2] + t * ab[2]};
  return norm(sub(p, q));
}

double one_sided_hausdorff(const Curve& from, const Curve& to) {
  std::size_t n = to.x.size();
  std::size_t segs = to.closed ? n : n - 1;
  double worst = 0.0;
  for (const Vec3& p : from.x) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t s = 0; s < segs; ++s)
      best = std::min(best,
                      point_segment_dist(p, to.x[s], to.x[wrap(s + 1, n)]));
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace

double circle_radius(double R0, double t) {
  double r2 = R0 * R0 - 2.0 * t;
  return r2 > 0 ? std::sqrt(r2) : 0.0;
}

Curve make_circle(double R0, const Vec3& center, int n) {
  if (n < 8) throw std::invalid_argument("make_circle: need at least 8 points");
  Curve c;
  c.closed = true;
  c.x.resize(n);
  for (int i = 0; i < n; ++i) {
    double a = 2.0 * M_PI * i / n;
    c.x[i] = {center[0] + R0 * std::cos(a), center[1] + R0 * std::sin(a),
              center[2]};
  }
  return c;
}

double curve_length(const Curve& c) {
  std::size_t n = c.x.size();
  if (n < 2) return 0.0;
  std::size_t segs = c.closed ? n : n - 1;
  double L = 0.0;
  for (std::size_t s = 0; s < segs; ++s)
    L += norm(sub(c.x[wrap(s + 1, n)], c.x[s]));
  return L;
}

std::vector<Vec3> curvature_vectors(const Curve& c) {
  std::size_t n = c.x.size();
  std::vector<Vec3> H(n, Vec3{0, 0, 0});
  if (n < 3) return H;
  std::size_t lo = c.closed ? 0 : 1;
  std::size_t hi = c.closed ? n : n - 1;
  for (std::size_t i = lo; i < hi; ++i) {
    const Vec3& xm = c.x[wrap(static_cast<std::ptrdiff_t>(i) - 1, n)];
    const Vec3& x0 = c.x[i];
    const Vec3& xp = c.x[wrap(i + 1, n)];
    double sm = norm(sub(x0, xm));
    double sp = norm(sub(xp, x0));
    if (sm <= 0 || sp <= 0) continue;
    for (int a = 0; a < 3; ++a)
      H[i][a] = 2.0 * ((xp[a] - x0[a]) / sp - (x0[a] - xm[a]) / sm) / (sp + sm);
  }
  return H;
}

void resample_uniform(Curve& c, int n_out) {
  std::size_t n = c.x.size();
  if (n < 3 || n_out < 3) return;
  std::vector<double> cum(1, 0.0);
  std::size_t segs = c.closed ? n : n - 1;
  for (std::size_t s = 0; s < segs; ++s)
    cum.push_back(cum.back() + norm(sub(c.x[wrap(s + 1, n)], c.x[s])));
  double L = cum.back();
  if (L <= 0) return;
  std::vector<Vec3> out(n_out);
  int spans = c.closed ? n_out : n_out - 1;
  for (int j = 0; j < n_out; ++j) {
    double target = L * j / spans;
    std::size_t s =
        std::upper_bound(cum.begin(), cum.end(), target) - cum.begin();
    s = std::min(std::max<std::size_t>(s, 1), cum.size() - 1) - 1;
    double seg = cum[s + 1] - cum[s];
    double t = seg > 0 ? (target - cum[s]) / seg : 0.0;
    const Vec3& a = c.x[s];
    const Vec3& b = c.x[wrap(s + 1, n)];
    out[j] = {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]),
              a[2] + t * (b[2] - a[2])};
  }
  if (!c.closed) out.back() = c.x.back();
  c.x = std::move(out);
}

void evolve_curve(Curve& c, double t_end, double dt_factor) {
  std::size_t n = c.x.size();
  if (n < 8) throw std::invalid_argument("evolve_curve: too few points");
  double t = 0.0;
  int step = 0;
  const int n_keep = static_cast<int>(n);
  while (t < t_end) {
    double min_s = std::numeric_limits<double>::max();
    std::size_t segs = c.closed ? c.x.size() : c.x.size() - 1;
    for (std::size_t s = 0; s < segs; ++s)
      min_s = std::min(
          min_s, norm(sub(c.x[wrap(s + 1, c.x.size())], c.x[s])));
    if (min_s <= 1e-12)
      throw std::runtime_error("evolve_curve: curve collapsed before t_end");
    double dt = std::min(dt_factor * min_s * min_s, t_end - t);

    std::vector<Vec3> H = curvature_vectors(c);
    // 1-4-6-4-1 smoothing keeps the explicit step from ringing.
    std::size_t m = c.x.size();
    std::vector<Vec3> Hs(m);
    for (std::size_t i = 0; i < m; ++i) {
      if (!c.closed && (i == 0 || i == m - 1)) {
        Hs[i] = {0, 0, 0};
        continue;
      }
      static const double w[5] = {1, 4, 6, 4, 1};
      Vec3 acc{0, 0, 0};
      double wsum = 0;
      for (int o = -2; o <= 2; ++o) {
        std::size_t k;
        if (c.closed) {
          k = wrap(static_cast<std::ptrdiff_t>(i) + o, m);
        } else {
          std::ptrdiff_t raw = static_cast<std::ptrdiff_t>(i) + o;
          if (raw < 0 || raw >= static_cast<std::ptrdiff_t>(m)) continue;
          k = static_cast<std::size_t>(raw);
        }
        for (int a = 0; a < 3; ++a) acc[a] += w[o + 2] * H[k][a];
        wsum += w[o + 2];
      }
      for (int a = 0; a < 3; ++a) Hs[i][a] = acc[a] / wsum;
    }
    for (std::size_t i = 0; i < m; ++i)
      for (int a = 0; a < 3; ++a) c.x[i][a] += dt * Hs[i][a];
    t += dt;
    if (++step % 10 == 0) resample_uniform(c, n_keep);
  }
  resample_uniform(c, n_keep);
}

RadiusFit fitted_radius(const Curve& c) {
  RadiusFit f;
  std::size_t n = c.x.size();
  if (n == 0) return f;
  for (const Vec3& p : c.x)
    for (int a = 0; a < 3; ++a) f.center[a] += p[a];
  for (int a = 0; a < 3; ++a) f.center[a] /= double(n);
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = norm(sub(c.x[i], f.center));
  for (double v : r) f.mean += v;
  f.mean /= double(n);
  double s2 = 0.0;
  for (double v : r) s2 += (v - f.mean) * (v - f.mean);
  f.rms_dev = std::sqrt(s2 / double(n));
  return f;
}

double hausdorff_distance(const Curve& a, const Curve& b) {
  return std::max(one_sided_hausdorff(a, b), one_sided_hausdorff(b, a));
}

double curve_measure(const Curve& c, const ScalarTestField& chi) {
  std::size_t n = c.x.size();
  if (n < 2) return 0.0;
  std::size_t segs = c.closed ? n : n - 1;
  double acc = 0.0;
  for (std::size_t s = 0; s < segs; ++s) {
    const Vec3& a = c.x[s];
    const Vec3& b = c.x[wrap(s + 1, n)];
    double mid[3] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]),
                     0.5 * (a[2] + b[2])};
    double cv = 0.0, gc[3] = {0, 0, 0};
    chi(mid, cv, gc);
    acc += cv * norm(sub(b, a));
  }
  return M_PI * acc;
}

double brakke_rate(const Curve& c, const ScalarTestField& chi) {
  std::size_t n = c.x.size();
  if (n < 3) return 0.0;
  std::vector<Vec3> H = curvature_vectors(c);
  std::size_t segs = c.closed ? n : n - 1;
  double acc = 0.0;
  for (std::size_t s = 0; s < segs; ++s) {
    std::size_t sn = wrap(s + 1, n);
    const Vec3& a = c.x[s];
    const Vec3& b = c.x[sn];
    double mid[3] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]),
                     0.5 * (a[2] + b[2])};
    Vec3 Hm{0.5 * (H[s][0] + H[sn][0]), 0.5 * (H[s][1] + H[sn][1]),
            0.5 * (H[s][2] + H[sn][2])};
    double cv = 0.0, gc[3] = {0, 0, 0};
    chi(mid, cv, gc);
    double gdotH = gc[0] * Hm[0] + gc[1] * Hm[1] + gc[2] * Hm[2];
    acc += (-cv * dot(Hm, Hm) + gdotH) * norm(sub(b, a));
  }
  return M_PI * acc;
}

}  // namespace glflow
