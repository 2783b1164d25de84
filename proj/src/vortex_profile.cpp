#include "glflow/vortex_profile.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace glflow {

namespace {

constexpr double kRmax = 24.0;
constexpr int kNodes = 48000;  // mesh intervals; spacing 5e-4

struct Profile {
  double hr;
  std::vector<double> y;   // node values
  std::vector<double> m;   // spline second derivatives
  double eval(double r) const {
    if (r >= kRmax) return 1.0 - 0.0;  // callers handle the tail
    std::size_t i = static_cast<std::size_t>(r / hr);
    if (i >= y.size() - 1) i = y.size() - 2;
    double a = r / hr - static_cast<double>(i);
    double b = 1.0 - a;
    double h2 = hr * hr / 6.0;
    return b * y[i] + a * y[i + 1] +
           ((b * b * b - b) * m[i] + (a * a * a - a) * m[i + 1]) * h2;
  }
};

void thomas_solve(std::vector<double>& lo, std::vector<double>& di,
                  std::vector<double>& up, std::vector<double>& rhs) {
  const std::size_t n = di.size();
  for (std::size_t i = 1; i < n; ++i) {
    double w = lo[i] / di[i - 1];
    di[i] -= w * up[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= di[n - 1];
  for (std::size_t i = n - 1; i-- > 0;)
    rhs[i] = (rhs[i] - up[i] * rhs[i + 1]) / di[i];
}

Profile solve_profile(int l) {
  const double ll = static_cast<double>(l) * l;
  const double hr = kRmax / kNodes;
  std::vector<double> u(kNodes + 1);
  for (int i = 0; i <= kNodes; ++i) {
    double r = i * hr;
    u[i] = r / std::sqrt(r * r + ll);  // smooth initial guess, right tail
  }
  u[0] = 0.0;
  u[kNodes] = 1.0 - ll / (2.0 * kRmax * kRmax);

  const int ni = kNodes - 1;  // unknowns u[1..kNodes-1]
  std::vector<double> lo(ni), di(ni), up(ni), rhs(ni);
  for (int iter = 0; iter < 200; ++iter) {
    double fmax = 0.0;
    for (int i = 1; i <= ni; ++i) {
      double r = i * hr;
      double f = (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (hr * hr) +
                 (u[i + 1] - u[i - 1]) / (2.0 * hr * r) - ll * u[i] / (r * r) +
                 u[i] * (1.0 - u[i] * u[i]);
      rhs[i - 1] = -f;
      fmax = std::max(fmax, std::fabs(f));
      lo[i - 1] = 1.0 / (hr * hr) - 1.0 / (2.0 * hr * r);
      di[i - 1] = -2.0 / (hr * hr) - ll / (r * r) + 1.0 - 3.0 * u[i] * u[i];
      up[i - 1] = 1.0 / (hr * hr) + 1.0 / (2.0 * hr * r);
    }
    if (fmax < 1e-12) break;
    thomas_solve(lo, di, up, rhs);
    double dmax = 0.0;
    for (int i = 0; i < ni; ++i) dmax = std::max(dmax, std::fabs(rhs[i]));
    double damp = dmax > 0.2 ? 0.2 / dmax : 1.0;
    for (int i = 0; i < ni; ++i) u[i + 1] += damp * rhs[i];
  }

  // Natural cubic spline second derivatives.
  Profile p;
  p.hr = hr;
  p.y = u;
  p.m.assign(kNodes + 1, 0.0);
  std::vector<double> slo(ni, 1.0), sdi(ni, 4.0), sup(ni, 1.0), srh(ni);
  for (int i = 1; i <= ni; ++i)
    srh[i - 1] = 6.0 * (u[i + 1] - 2.0 * u[i] + u[i - 1]) / (hr * hr);
  thomas_solve(slo, sdi, sup, srh);
  for (int i = 1; i <= ni; ++i) p.m[i] = srh[i - 1];
  return p;
}

const Profile& cached_profile(int l) {
  static std::mutex mu;
  static std::map<int, Profile> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(l);
  if (it == cache.end()) it = cache.emplace(l, solve_profile(l)).first;
  return it->second;
}

}  // namespace

double vortex_profile(int degree, double r) {
  if (degree == 0)
    throw std::invalid_argument("vortex_profile: degree must be nonzero");
  if (!(r >= 0.0))
    throw std::invalid_argument("vortex_profile: radius must be >= 0, got " +
                                std::to_string(r));
  int l = std::abs(degree);
  double ll = static_cast<double>(l) * l;
  if (r >= kRmax) return 1.0 - ll / (2.0 * r * r);
  return cached_profile(l).eval(r);
}

}  // namespace glflow
