#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "diracmm/constants.hpp"
#include "diracmm/radial.hpp"

namespace diracmm {

struct QuadratureConfig {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_subdivisions = 200;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw std::domain_error("QuadratureConfig: tolerances must be positive");
    if (max_subdivisions < 10)
      throw std::domain_error("QuadratureConfig: max_subdivisions >= 10");
  }
};

/// moment(a, sigma) = integral_0^inf r^a exp(-sigma r) dr
///                  = Gamma(a+1) / sigma^(a+1).
inline double moment(double a, double sigma) {
  if (!(a > -1.0))
    throw std::domain_error("moment: exponent a must exceed -1");
  if (!(sigma > 0.0))
    throw std::domain_error("moment: sigma must be positive");
  return std::exp(std::lgamma(a + 1.0) - (a + 1.0) * std::log(sigma));
}

/// Slater matrix element with an extra power of r:
/// integral f1(r) f2(r) r^(2+shift) dr, closed form via moment().
inline double weighted_element(const RadialFunction &f1,
                               const RadialFunction &f2, double shift = 0.0) {
  double sum = 0.0;
  for (const auto &a : f1.terms)
    for (const auto &b : f2.terms)
      sum += a.coeff * b.coeff *
             moment(a.power + b.power + 2.0 + shift, a.zeta + b.zeta);
  return sum;
}

/// Radial scalar product (f1, f2) = integral f1 f2 r^2 dr.
inline double overlap(const RadialFunction &f1, const RadialFunction &f2) {
  return weighted_element(f1, f2, 0.0);
}

inline double overlap(const Orbital &a, const Orbital &b) {
  return a.channel.kappa == b.channel.kappa ? overlap(a.radial, b.radial)
                                            : 0.0;
}

/// (f1, ePhi f2) = -Z integral f1 f2 r dr for the point-Coulomb potential.
inline double potential_element(const RadialFunction &f1,
                                const RadialFunction &f2, PotentialSpec V) {
  if (V.Z == 0.0)
    return 0.0;
  return -V.Z * weighted_element(f1, f2, -1.0);
}

namespace detail {

// 15-point Gauss-Legendre nodes/weights on [-1, 1] (positive half; the
// rule is symmetric).
struct Gauss15 {
  static constexpr std::array<double, 8> x = {
      0.0,
      0.2011940939974345223006283,
      0.3941513470775633698972074,
      0.5709721726085388475372267,
      0.7244177313601700474161861,
      0.8482065834104272162006483,
      0.9372733924007059043077589,
      0.9879925180204854284895657};
  static constexpr std::array<double, 8> w = {
      0.2025782419255612728806202,
      0.1984314853271115764561183,
      0.1861610000155622110268006,
      0.1662692058169939335532009,
      0.1395706779261543144478048,
      0.1071592204671719350118695,
      0.0703660474881081247092674,
      0.0307532419961172683546284};
};

template <typename F> double gauss15(const F &f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = Gauss15::w[0] * f(mid);
  for (int i = 1; i < 8; ++i)
    sum += Gauss15::w[i] *
           (f(mid - half * Gauss15::x[i]) + f(mid + half * Gauss15::x[i]));
  return half * sum;
}

template <typename F>
double adaptive_panel(const F &f, double a, double b, double whole,
                      double tol, int depth, int &budget) {
  if (--budget < 0)
    throw std::runtime_error("adaptive quadrature: subdivision budget exhausted");
  const double mid = 0.5 * (a + b);
  const double left = gauss15(f, a, mid);
  const double right = gauss15(f, mid, b);
  const double err = std::abs(left + right - whole);
  if (err <= tol || depth > 60)
    return left + right;
  return adaptive_panel(f, a, mid, left, 0.5 * tol, depth + 1, budget) +
         adaptive_panel(f, mid, b, right, 0.5 * tol, depth + 1, budget);
}

} // namespace detail

/// Adaptive integration of F over r in (0, inf) through the map
/// r = t/(1-t), t in [0, 1).
template <typename F>
double integrate_semi_infinite(const F &f, const QuadratureConfig &cfg = {}) {
  cfg.validate();
  auto mapped = [&f](double t) {
    const double om = 1.0 - t;
    if (om <= 0.0)
      return 0.0;
    const double r = t / om;
    return f(r) / (om * om);
  };
  // First pass on a handful of fixed panels to get a scale estimate.
  const std::array<double, 7> knots = {0.0,  0.25, 0.5,  0.75,
                                       0.9,  0.99, 1.0};
  double rough = 0.0;
  for (size_t i = 0; i + 1 < knots.size(); ++i)
    rough += detail::gauss15(mapped, knots[i], knots[i + 1]);
  const double tol =
      std::max(cfg.abs_tol, cfg.rel_tol * std::abs(rough));
  int budget = cfg.max_subdivisions * 64;
  double total = 0.0;
  for (size_t i = 0; i + 1 < knots.size(); ++i) {
    const double whole = detail::gauss15(mapped, knots[i], knots[i + 1]);
    total += detail::adaptive_panel(mapped, knots[i], knots[i + 1], whole,
                                    tol / 6.0, 0, budget);
  }
  return total;
}

/// The resolvent matrix element of Eq.-(15) type with a local Coulomb
/// potential: integral g(r)^2 r^3 / ((eps + mc^2) r + Z) dr.
/// The caller supplies eps including rest mass and scales by c^2.
inline double resolvent_element(const RadialFunction &g, double eps,
                                PotentialSpec V,
                                const QuadratureConfig &cfg = {},
                                const Constants &k = {}) {
  const double w = eps + k.mc2();
  if (!(w > 0.0))
    throw std::domain_error(
        "resolvent_element: eps + mc^2 <= 0 (negative branch; use the "
        "finite-lower-space path)");
  auto integrand = [&](double r) {
    const double gv = g(r);
    return gv * gv * r * r * r / (w * r + V.Z);
  };
  return integrate_semi_infinite(integrand, cfg);
}

/// Normalized radial density D(r) = r^2 (u^2 + l^2) / [(u,u) + (l,l)].
inline std::vector<double> radial_density(const SpinorTrial &t,
                                          const std::vector<double> &r_grid) {
  for (size_t i = 0; i < r_grid.size(); ++i) {
    if (!(r_grid[i] > 0.0) || (i > 0 && !(r_grid[i] > r_grid[i - 1])))
      throw std::domain_error("radial_density: grid must be positive and "
                              "strictly increasing");
  }
  const double norm =
      overlap(t.upper.radial, t.upper.radial) +
      overlap(t.lower.radial, t.lower.radial);
  std::vector<double> out;
  out.reserve(r_grid.size());
  for (double r : r_grid) {
    const double u = t.upper.radial(r);
    const double l = t.lower.radial(r);
    out.push_back(r * r * (u * u + l * l) / norm);
  }
  return out;
}

} // namespace diracmm
