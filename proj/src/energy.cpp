#include "glflow/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "glflow/fft.hpp"
#include "glflow/quadrature.hpp"
#include "glflow/reduce.hpp"

namespace glflow {

namespace {

// Accumulates |grad u|^2 into out using wrapped central differences.
void grad_sq_fd(const ComplexField& u, std::vector<double>& out) {
  const GridSpec& g = u.grid;
  const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
  const double i2h = 1.0 / (2.0 * g.h);
  parallel_for(u.size(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    auto at = [&](int a, int b, int c) {
      a += (a < 0) ? n0 : (a >= n0 ? -n0 : 0);
      b += (b < 0) ? n1 : (b >= n1 ? -n1 : 0);
      c += (c < 0) ? n2 : (c >= n2 ? -n2 : 0);
      return u.a[(static_cast<std::size_t>(a) * n1 + b) * n2 + c];
    };
    double s = std::norm((at(i + 1, j, k) - at(i - 1, j, k)) * i2h) +
               std::norm((at(i, j + 1, k) - at(i, j - 1, k)) * i2h);
    if (g.dim == 3) s += std::norm((at(i, j, k + 1) - at(i, j, k - 1)) * i2h);
    out[idx] = s;
  });
}

// Same with the five-point fourth-order stencil.
void grad_sq_fd4(const ComplexField& u, std::vector<double>& out) {
  const GridSpec& g = u.grid;
  const int n0 = g.n[0], n1 = g.n[1], n2 = g.n[2];
  const double i12h = 1.0 / (12.0 * g.h);
  parallel_for(u.size(), worker_threads(), [&](std::size_t idx) {
    int i, j, k;
    decode_index(g, idx, i, j, k);
    auto at = [&](int a, int b, int c) {
      a = ((a % n0) + n0) % n0;
      b = ((b % n1) + n1) % n1;
      c = ((c % n2) + n2) % n2;
      return u.a[(static_cast<std::size_t>(a) * n1 + b) * n2 + c];
    };
    auto d1 = [&](cplx m2, cplx m1, cplx p1, cplx p2) {
      return (m2 - p2 + 8.0 * (p1 - m1)) * i12h;
    };
    double s = std::norm(d1(at(i - 2, j, k), at(i - 1, j, k), at(i + 1, j, k),
                            at(i + 2, j, k))) +
               std::norm(d1(at(i, j - 2, k), at(i, j - 1, k), at(i, j + 1, k),
                            at(i, j + 2, k)));
    if (g.dim == 3)
      s += std::norm(d1(at(i, j, k - 2), at(i, j, k - 1), at(i, j, k + 1),
                        at(i, j, k + 2)));
    out[idx] = s;
  });
}

void grad_sq_spectral(const ComplexField& u, std::vector<double>& out) {
  std::array<ComplexField, 3> grad;
  spectral_for(u.grid).gradient(u, grad);
  parallel_for(u.size(), worker_threads(), [&](std::size_t idx) {
    double s = std::norm(grad[0].a[idx]) + std::norm(grad[1].a[idx]);
    if (u.grid.dim == 3) s += std::norm(grad[2].a[idx]);
    out[idx] = s;
  });
}

}  // namespace

std::vector<double> energy_density(const ComplexField& u, GradientMode mode) {
  std::vector<double> e(u.size());
  if (mode == GradientMode::kSpectral)
    grad_sq_spectral(u, e);
  else if (mode == GradientMode::kCentralFD4)
    grad_sq_fd4(u, e);
  else
    grad_sq_fd(u, e);
  const double q = 1.0 / (4.0 * u.grid.epsilon * u.grid.epsilon);
  parallel_for(u.size(), worker_threads(), [&](std::size_t i) {
    double d = 1.0 - std::norm(u.a[i]);
    e[i] = 0.5 * e[i] + q * d * d;
  });
  return e;
}

std::vector<double> potential_density(const ComplexField& u) {
  std::vector<double> v(u.size());
  const double q = 1.0 / (4.0 * u.grid.epsilon * u.grid.epsilon);
  parallel_for(u.size(), worker_threads(), [&](std::size_t i) {
    double d = 1.0 - std::norm(u.a[i]);
    v[i] = q * d * d;
  });
  return v;
}

double integrate(const GridSpec& g, const std::vector<double>& density) {
  double cell = std::pow(g.h, g.dim);
  return pairwise_sum(density) * cell;
}

double total_energy(const ComplexField& u, GradientMode mode) {
  return integrate(u.grid, energy_density(u, mode));
}

double sup_local_energy(const GridSpec& g, const std::vector<double>& density,
                        double radius) {
  int stride = std::max(1, static_cast<int>(std::lround(0.5 / g.h)));
  double best = 0.0;
  int kmax = (g.dim == 3) ? g.n[2] : 1;
  for (int i = 0; i < g.n[0]; i += stride)
    for (int j = 0; j < g.n[1]; j += stride)
      for (int k = 0; k < kmax; k += stride) {
        double c[3] = {g.h * i, g.h * j, g.h * k};
        best = std::max(best, ball_sum(g, density, c, radius));
      }
  return best;
}

double weighted_energy(const GridSpec& g, const std::vector<double>& density,
                       const double* center, double R, bool image_sum) {
  if (!(R > 0)) throw std::invalid_argument("weighted_energy: R must be > 0");
  return std::pow(R, 2 - g.dim) *
         gaussian_weighted_sum(g, density, center, R, image_sum);
}

double kernel_average(const GridSpec& g, const std::vector<double>& density,
                      const double* center, double s, bool image_sum) {
  if (!(s > 0)) throw std::invalid_argument("kernel_average: s must be > 0");
  double norm = std::pow(4.0 * M_PI * s, -0.5 * g.dim);
  return norm *
         gaussian_weighted_sum(g, density, center, std::sqrt(s), image_sum);
}

std::vector<double> xi_density(const ComplexField& u, const ComplexField& dudt,
                               const double* xstar, double tstar) {
  const GridSpec& g = u.grid;
  double dt = u.t - tstar;
  if (std::abs(dt) < 1e-14)
    throw std::invalid_argument(
        "xi_density: slice coincides with the reference time");
  std::array<ComplexField, 3> grad;
  spectral_for(g).gradient(u, grad);
  std::vector<double> xi(u.size());
  const double inv4 = 1.0 / (4.0 * std::abs(dt));
  parallel_for(u.size(), worker_threads(), [&](std::size_t idx) {
    int ia, ja, ka;
    decode_index(g, idx, ia, ja, ka);
    double dx0 = min_image(g.h * ia - xstar[0], g.length(0));
    double dx1 = min_image(g.h * ja - xstar[1], g.length(1));
    cplx s = dx0 * grad[0].a[idx] + dx1 * grad[1].a[idx];
    if (g.dim == 3) {
      double dx2 = min_image(g.h * ka - xstar[2], g.length(2));
      s += dx2 * grad[2].a[idx];
    }
    s += 2.0 * dt * dudt.a[idx];
    xi[idx] = std::norm(s) * inv4;
  });
  return xi;
}

double stress_residual(const ComplexField& u, const ComplexField& w,
                       const VectorTestField& X, GradientMode mode) {
  const GridSpec& g = u.grid;
  std::array<ComplexField, 3> grad;
  spectral_for(g).gradient(u, grad);
  std::vector<double> e = energy_density(u, mode);
  const int d = g.dim;
  double sum = pairwise_sum_indexed(u.size(), [&](std::size_t idx) {
    int ia, ja, ka;
    decode_index(g, idx, ia, ja, ka);
    double x[3] = {g.h * ia, g.h * ja, g.h * ka};
    double Xv[3] = {0, 0, 0};
    double G[9] = {0, 0, 0, 0, 0, 0, 0, 0, 0};
    X(x, Xv, G);
    cplx du[3];
    for (int a = 0; a < d; ++a) du[a] = grad[a].a[idx];
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        double A = (i == j ? e[idx] : 0.0) -
                   (du[i] * std::conj(du[j])).real();
        s += A * G[3 * i + j];
      }
    for (int i = 0; i < d; ++i)
      s -= (w.a[idx] * std::conj(du[i])).real() * Xv[i];
    return s;
  });
  return sum * std::pow(g.h, d) / log_inv_eps(g.epsilon);
}

double chi_measure(const ComplexField& u, const ScalarTestField& chi,
                   GradientMode mode) {
  const GridSpec& g = u.grid;
  std::vector<double> e = energy_density(u, mode);
  double sum = pairwise_sum_indexed(u.size(), [&](std::size_t idx) {
    int ia, ja, ka;
    decode_index(g, idx, ia, ja, ka);
    double x[3] = {g.h * ia, g.h * ja, g.h * ka};
    double c = 0.0, gc[3] = {0, 0, 0};
    chi(x, c, gc);
    return c * e[idx];
  });
  return sum * std::pow(g.h, g.dim) / log_inv_eps(g.epsilon);
}

double balance_rhs(const ComplexField& u, const ComplexField& w,
                   const ScalarTestField& chi) {
  const GridSpec& g = u.grid;
  std::array<ComplexField, 3> grad;
  spectral_for(g).gradient(u, grad);
  const int d = g.dim;
  double sum = pairwise_sum_indexed(u.size(), [&](std::size_t idx) {
    int ia, ja, ka;
    decode_index(g, idx, ia, ja, ka);
    double x[3] = {g.h * ia, g.h * ja, g.h * ka};
    double c = 0.0, gc[3] = {0, 0, 0};
    chi(x, c, gc);
    double s = -c * std::norm(w.a[idx]);
    for (int i = 0; i < d; ++i)
      s -= gc[i] * (w.a[idx] * std::conj(grad[i].a[idx])).real();
    return s;
  });
  return sum * std::pow(g.h, d) / log_inv_eps(g.epsilon);
}

}  // namespace glflow
