#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace vslab {

// Raised on invalid user input (bad config, bad flag values). CLI exit code 1.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a computation has to stop (CFL breach, folded interface,
// singular boundary solve, divergence). CLI exit code 2.
struct numerical_abort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double pi = 3.14159265358979323846;

inline bool nearly_equal(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// C^infinity bump supported on |r| < 1, equal to 1 at r = 0.
inline double bump(double r) {
  const double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - r2));
}

// Smooth transition: 1 for x <= 0, 0 for x >= 1.
inline double smooth_step_down(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return b / (a + b);
}

// Time cutoff used by approximate solutions: 1 on [-t_half, t_half],
// 0 outside [-t_full, t_full].
struct TimeCutoff {
  double t_half = 0.5;
  double t_full = 1.0;
  double operator()(double t) const {
    const double a = std::abs(t);
    if (a <= t_half) return 1.0;
    if (a >= t_full) return 0.0;
    return smooth_step_down((a - t_half) / (t_full - t_half));
  }
  // d/dt, sign-correct for negative t.
  double deriv(double t) const {
    const double h = 1e-6 * (t_full - t_half);
    return ((*this)(t + h) - (*this)(t - h)) / (2.0 * h);
  }
};

namespace detail {
inline int& thread_count_ref() {
  static int n = 1;
  return n;
}
}  // namespace detail

inline void set_thread_count(int n) {
  detail::thread_count_ref() = std::max(1, n);
}
inline int thread_count() { return detail::thread_count_ref(); }

// Static-partition parallel loop with deterministic output: the body writes
// only to slots indexed by i, so the result does not depend on scheduling.
template <class F>
void parallel_for(std::int64_t n, F&& body) {
  const int nthreads = thread_count();
  if (nthreads <= 1 || n < 64) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::int64_t chunk = (n + nthreads - 1) / nthreads;
  for (int t = 0; t < nthreads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace vslab
