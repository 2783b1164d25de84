#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace glflow {

// All floating-point reductions in the library go through pairwise_sum so
// that results are bit-identical for a given input regardless of thread
// count: the reduction tree depends only on n.
namespace detail {
template <class F>
double pairwise_sum_impl(std::size_t lo, std::size_t hi, const F& f) {
  if (hi - lo <= 32) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += f(i);
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum_impl(lo, mid, f) + pairwise_sum_impl(mid, hi, f);
}
}  // namespace detail

template <class F>
double pairwise_sum_indexed(std::size_t n, const F& f) {
  if (n == 0) return 0.0;
  return detail::pairwise_sum_impl(0, n, f);
}

inline double pairwise_sum(const double* x, std::size_t n) {
  return pairwise_sum_indexed(n, [x](std::size_t i) { return x[i]; });
}

inline double pairwise_sum(const std::vector<double>& x) {
  return pairwise_sum(x.data(), x.size());
}

// Static contiguous partition over [0, n); each index is visited exactly
// once, and distinct threads touch disjoint indices only.  Safe for
// pointwise writes; never use for reductions.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
  if (threads <= 1 || n < 4096) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::size_t nt = static_cast<std::size_t>(threads);
  if (nt > n) nt = n;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    std::size_t lo = n * t / nt, hi = n * (t + 1) / nt;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Global worker-count knob, set once by the CLI / test harness.
int worker_threads();
void set_worker_threads(int n);

}  // namespace glflow
