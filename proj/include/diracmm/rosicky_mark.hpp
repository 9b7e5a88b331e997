#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "diracmm/constants.hpp"
#include "diracmm/integrals.hpp"
#include "diracmm/matrix.hpp"
#include "diracmm/radial.hpp"

namespace diracmm {

enum class Branch { positive, negative };

struct StationarySolution {
  double eps0;           // total energy, rest mass included
  double eps0_minus_mc2; // shifted value, free of the mc^2 cancellation
  Branch branch;
  double residual;
  double lower_norm_fraction;
};

namespace detail {

// Integrals over the optimal lower component l = c g r / ((eps+mc^2) r + Z):
// norm integral g^2 r^4 / d^2 and potential integral -Z g^2 r^3 / d^2.
inline double optimal_lower_norm(const RadialFunction &g, double w, double Z,
                                 double c, const QuadratureConfig &cfg) {
  auto f = [&](double r) {
    const double gv = g(r);
    const double d = w * r + Z;
    return c * c * gv * gv * r * r * r * r / (d * d);
  };
  return integrate_semi_infinite(f, cfg);
}

inline double optimal_lower_pot(const RadialFunction &g, double w, double Z,
                                double c, const QuadratureConfig &cfg) {
  if (Z == 0.0)
    return 0.0;
  auto f = [&](double r) {
    const double gv = g(r);
    const double d = w * r + Z;
    return c * c * gv * gv * r * r * r / (d * d);
  };
  return -Z * integrate_semi_infinite(f, cfg);
}

} // namespace detail

/// Positive-branch solution of the Rosicky-Mark equation: root of
///   h(E) = E (u,u) - (u, ePhi u) - c^2 R(mc^2 + E)
/// in the shifted energy E = eps - mc^2, with R the local-resolvent
/// quadrature. Bracketed by 64 logarithmic probes of eps + mc^2 on
/// (0, 5 mc^2], bisected, then secant-polished.
inline StationarySolution stationary_positive(const Orbital &u,
                                              PotentialSpec V,
                                              const QuadratureConfig &cfg = {},
                                              const Constants &k = {}) {
  if (!(k.alpha() * V.Z < 1.0))
    throw std::domain_error("stationary_positive: alpha*Z >= 1");
  const double mc2 = k.mc2();
  const double nu = overlap(u.radial, u.radial);
  const double pot = potential_element(u.radial, u.radial, V);
  const Orbital g = sigma_p_apply(u);

  // h as a function of w = eps + mc^2 > 0; E = w - 2 mc^2... kept in
  // terms of the shifted energy E = eps - mc^2 to avoid cancellation.
  auto h = [&](double E) {
    const double eps = E + mc2;
    return E * nu - pot - k.c * k.c * resolvent_element(g.radial, eps, V, cfg, k);
  };

  // Probe grid: w = eps + mc^2 logarithmic on [1e-9 mc^2, 5 mc^2].
  const int n_probe = 64;
  const double w_lo = 1e-9 * mc2, w_hi = 5.0 * mc2;
  double E_prev = w_lo - 2.0 * mc2;
  double h_prev = h(E_prev);
  double a = 0.0, b = 0.0;
  bool found = false;
  std::string trace;
  for (int i = 1; i < n_probe; ++i) {
    const double w = w_lo * std::pow(w_hi / w_lo, double(i) / (n_probe - 1));
    const double E = w - 2.0 * mc2;
    const double hv = h(E);
    if (h_prev <= 0.0 && hv >= 0.0) {
      a = E_prev;
      b = E;
      found = true;
      break;
    }
    trace += " h(" + std::to_string(E) + ")=" + std::to_string(hv);
    E_prev = E;
    h_prev = hv;
  }
  if (!found)
    throw std::runtime_error(
        "stationary_positive: no sign change of h on the probe grid;" + trace);

  double ha = h(a), hb = h(b);
  while (b - a > 1e-13 * mc2) {
    const double m = 0.5 * (a + b);
    const double hm = h(m);
    if (hm < 0.0) {
      a = m;
      ha = hm;
    } else {
      b = m;
      hb = hm;
    }
  }
  double x0 = a, x1 = b, f0 = ha, f1 = hb;
  for (int i = 0; i < 5 && f1 != f0; ++i) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!std::isfinite(x2))
      break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = h(x1);
  }
  const double E = x1;
  const double w = E + 2.0 * mc2;
  const double nl = detail::optimal_lower_norm(g.radial, w, V.Z, k.c, cfg);
  return StationarySolution{E + mc2, E, Branch::positive, f1 / nu,
                            nl / (nu + nl)};
}

/// Pointwise optimal lower component l(r) = c g(r) r / ((eps0+mc^2) r + Z).
inline std::vector<double> optimal_lower(const Orbital &u, PotentialSpec V,
                                         double eps0,
                                         const std::vector<double> &r_grid,
                                         const Constants &k = {}) {
  const double w = eps0 + k.mc2();
  if (!(w > 0.0))
    throw std::domain_error("optimal_lower: eps0 <= -mc^2 (negative branch)");
  const Orbital g = sigma_p_apply(u);
  std::vector<double> out;
  out.reserve(r_grid.size());
  for (double r : r_grid)
    out.push_back(k.c * g.radial(r) * r / (w * r + V.Z));
  return out;
}

struct SeriesEnergy {
  double eps_plus;
  double eps_plus_minus_mc2;
  double eps_minus;
  double eps_minus_plus_mc2;
};

/// Truncations of the expanded Rosicky-Mark equation. Order 0 is the
/// plain Schroedinger-like sum; orders 1 and 2 keep the respective
/// sigma.p ePhi sigma.p corrections and solve the truncated equation
/// self-consistently (Newton in the shifted energy).
inline SeriesEnergy series_energy(const Orbital &u, PotentialSpec V, int order,
                                  const Constants &k = {}) {
  if (order < 0 || order > 2)
    throw std::domain_error("series_energy: order must be 0, 1 or 2");
  const double mc2 = k.mc2();
  const double nu = overlap(u.radial, u.radial);
  const Orbital g = sigma_p_apply(u);
  const double p2 = overlap(g.radial, g.radial) / nu;
  const double ephi = potential_element(u.radial, u.radial, V) / nu;
  const double eps_minus_shift = -p2 / 2.0;

  double E = p2 / 2.0 + ephi; // order-0 shifted value
  if (order >= 1) {
    const double A = potential_element(g.radial, g.radial, V) / nu;
    const double B =
        order >= 2 ? V.Z * V.Z * weighted_element(g.radial, g.radial, -2.0) / nu
                   : 0.0;
    const double c2 = k.c * k.c;
    // F(E) = (E+mc2)^2 - m^2c^4 - c^2 p2 - (E+2mc2) ephi
    //        - c^2 A/(E+2mc2) - c^2 B/(E+2mc2)^2, expanded so the
    //        quartic-in-c pieces cancel analytically.
    auto F = [&](double x) {
      const double w = x + 2.0 * mc2;
      double v = x * x + 2.0 * mc2 * x - c2 * p2 - w * ephi - c2 * A / w;
      if (order >= 2)
        v -= c2 * B / (w * w);
      return v;
    };
    auto dF = [&](double x) {
      const double w = x + 2.0 * mc2;
      double v = 2.0 * x + 2.0 * mc2 - ephi + c2 * A / (w * w);
      if (order >= 2)
        v += 2.0 * c2 * B / (w * w * w);
      return v;
    };
    for (int i = 0; i < 50; ++i) {
      const double step = F(E) / dF(E);
      E -= step;
      if (std::abs(step) < 1e-15 * mc2)
        break;
    }
  }
  return SeriesEnergy{mc2 + E, E, -mc2 + eps_minus_shift, eps_minus_shift};
}

/// Spurious-root minimum over a finite lower space: lowest eigenvalue of
/// the generalized problem on {u} + span{normalized sigma.p u, extra
/// even-tempered lowers}. Non-increasing in lower_dim.
inline StationarySolution stationary_negative(const Orbital &u,
                                              PotentialSpec V, int lower_dim,
                                              const Constants &k = {}) {
  if (lower_dim < 1)
    throw std::domain_error("stationary_negative: lower_dim >= 1 required");
  BasisSet basis;
  basis.uppers.push_back(u);
  Orbital g = sigma_p_apply(u);
  const double gn = std::sqrt(overlap(g.radial, g.radial));
  basis.lowers.push_back(Orbital{g.radial.scaled(1.0 / gn), g.channel});
  const double zeta0 = u.radial.terms.front().zeta;
  for (int j = 1; j < lower_dim; ++j) {
    const double zeta = zeta0 * std::pow(2.0, j);
    RadialFunction f = RadialFunction::slater(1.0, 0.0, zeta);
    const double n = std::sqrt(overlap(f, f));
    basis.lowers.push_back(Orbital{f.scaled(1.0 / n), g.channel});
  }
  const MatrixBlocks blocks = build_blocks(basis, V, k);
  const DiagonalizationResult d = diagonalize(blocks, k);
  const double E = d.eigenvalues_shifted.front(); // lowest, eps - mc^2
  const double nl_frac = [&] {
    // Lower-block weight of the lowest eigenvector.
    const auto &v = d.eigenvectors.front();
    double wl = 0.0, wu = 0.0;
    for (size_t i = 0; i < basis.uppers.size(); ++i)
      for (size_t j = 0; j < basis.uppers.size(); ++j)
        wu += v[i] * v[j] * blocks.Suu[i][j];
    const size_t off = basis.uppers.size();
    for (size_t i = 0; i < basis.lowers.size(); ++i)
      for (size_t j = 0; j < basis.lowers.size(); ++j)
        wl += v[off + i] * v[off + j] * blocks.Sll[i][j];
    return wl / (wu + wl);
  }();
  return StationarySolution{E + k.mc2(), E, Branch::negative, 0.0, nl_frac};
}

} // namespace diracmm
