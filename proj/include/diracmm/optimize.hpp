#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace diracmm {

struct OptimizeResult {
  double x;
  double f;
  bool interior = true;
};

namespace detail {

// Expands outward from (a, b) until f(b) sits above both neighbours.
// f is the function to MAXIMIZE here.
template <typename F>
bool bracket_maximum(const F &f, double &a, double &b, double &c, double &fb,
                     int max_expand = 200) {
  double fa = f(a);
  fb = f(b);
  if (fa > fb) {
    std::swap(a, b);
    std::swap(fa, fb);
  }
  c = b + 1.618033988749895 * (b - a);
  double fc = f(c);
  int n = 0;
  while (fc >= fb) {
    if (++n > max_expand)
      return false;
    a = b;
    fa = fb;
    b = c;
    fb = fc;
    c = b + 1.618033988749895 * (b - a);
    fc = f(c);
  }
  if (a > c)
    std::swap(a, c);
  return true;
}

} // namespace detail

/// Golden-section maximization inside [lo, hi]; runs to a fixed parameter
/// tolerance so the located maximizer is accurate enough for derivative
/// checks downstream.
template <typename F>
OptimizeResult golden_max(const F &f, double lo, double hi,
                          double x_tol = 1e-10) {
  const double gr = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > x_tol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = f(x1);
    }
  }
  const double x = 0.5 * (a + b);
  return OptimizeResult{x, f(x), true};
}

template <typename F>
OptimizeResult golden_min(const F &f, double lo, double hi,
                          double x_tol = 1e-10) {
  auto neg = [&f](double x) { return -f(x); };
  OptimizeResult r = golden_max(neg, lo, hi, x_tol);
  r.f = -r.f;
  return r;
}

/// Maximize starting from a seed, expanding a bracket first.
template <typename F>
OptimizeResult maximize_from_seed(const F &f, double seed, double step,
                                  double x_tol = 1e-10) {
  double a = seed - step, b = seed, c;
  double fb;
  if (!detail::bracket_maximum(f, a, b, c, fb))
    throw std::runtime_error("maximize_from_seed: no interior maximum found");
  return golden_max(f, a, c, x_tol);
}

template <typename F>
OptimizeResult minimize_from_seed(const F &f, double seed, double step,
                                  double x_tol = 1e-10) {
  auto neg = [&f](double x) { return -f(x); };
  OptimizeResult r = maximize_from_seed(neg, seed, step, x_tol);
  r.f = -r.f;
  return r;
}

} // namespace diracmm
