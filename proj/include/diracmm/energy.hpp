#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>

#include "diracmm/constants.hpp"
#include "diracmm/integrals.hpp"
#include "diracmm/radial.hpp"

namespace diracmm {

/// Lower component = lambda * sigma.p u; lambda is the balance scale
/// (optimum near 1/2c).
struct KineticBalance {
  double lambda = 0.0;
};

/// Lower = zeta^-1 sqrt((1-gamma)/(1+gamma)) sigma.p u with gamma taken
/// at |kappa_param|; the coupling family of the shower diagrams.
struct PaperKappa {
  double kappa_param = 1.0;
};

/// Lower radial equals lambda times the upper radial in the -kappa
/// channel; the family behind the equal-density scan.
struct SameRadial {
  double lambda = 0.0;
};

struct Explicit {
  RadialFunction lower;
  int kappa;
};

using CouplingSpec = std::variant<KineticBalance, PaperKappa, SameRadial, Explicit>;

/// Current scalar parameter of a one-parameter family.
inline double coupling_parameter(const CouplingSpec &spec) {
  if (const auto *kb = std::get_if<KineticBalance>(&spec))
    return kb->lambda;
  if (const auto *pk = std::get_if<PaperKappa>(&spec))
    return pk->kappa_param;
  if (const auto *sr = std::get_if<SameRadial>(&spec))
    return sr->lambda;
  throw std::domain_error("coupling_parameter: Explicit has no parameter");
}

inline CouplingSpec with_parameter(const CouplingSpec &spec, double p) {
  if (std::holds_alternative<KineticBalance>(spec))
    return KineticBalance{p};
  if (std::holds_alternative<PaperKappa>(spec))
    return PaperKappa{p};
  if (std::holds_alternative<SameRadial>(spec))
    return SameRadial{p};
  throw std::domain_error("with_parameter: Explicit has no parameter");
}

/// Materialize l = Omega u as a closed-form RadialFunction.
inline Orbital materialize_lower(const Orbital &u, const CouplingSpec &spec,
                                 PotentialSpec V, const Constants &k = {}) {
  if (const auto *kb = std::get_if<KineticBalance>(&spec)) {
    Orbital g = sigma_p_apply(u);
    return Orbital{g.radial.scaled(kb->lambda), g.channel};
  }
  if (const auto *pk = std::get_if<PaperKappa>(&spec)) {
    const double g = gamma_kappa(pk->kappa_param, V, k);
    const double zeta = u.radial.terms.front().zeta;
    const double coeff = std::sqrt((1.0 - g) / (1.0 + g)) / zeta;
    Orbital sp = sigma_p_apply(u);
    return Orbital{sp.radial.scaled(coeff), sp.channel};
  }
  if (const auto *sr = std::get_if<SameRadial>(&spec))
    return Orbital{u.radial.scaled(sr->lambda),
                   SpinorChannel(-u.channel.kappa)};
  const auto &ex = std::get<Explicit>(spec);
  return Orbital{ex.lower, SpinorChannel(ex.kappa)};
}

/// Terms of the Rayleigh quotient, Eq.-(9) layout. eps carries the rest
/// mass; eps_minus_mc2 is assembled without the mc^2 cancellation so it
/// stays accurate when c is scaled large.
struct EnergyBreakdown {
  double eps;
  double eps_minus_mc2;
  double norm_u;
  double norm_l;
  double pot_u;
  double pot_l;
  double cross;
};

inline EnergyBreakdown energy(const Orbital &u, const CouplingSpec &spec,
                              PotentialSpec V, const Constants &k = {}) {
  const Orbital l = materialize_lower(u, spec, V, k);
  const double nu = overlap(u.radial, u.radial);
  const double nl = overlap(l.radial, l.radial);
  if (!(nu + nl > 0.0))
    throw std::domain_error("energy: trial has zero norm");
  const double pu = potential_element(u.radial, u.radial, V);
  const double pl = potential_element(l.radial, l.radial, V);
  double cross = 0.0;
  if (l.channel.kappa == -u.channel.kappa) {
    const Orbital g = sigma_p_apply(u);
    cross = 2.0 * k.c * overlap(g.radial, l.radial);
  }
  const double shifted = (-2.0 * k.mc2() * nl + pu + pl + cross) / (nu + nl);
  return EnergyBreakdown{shifted + k.mc2(), shifted, nu, nl, pu, pl, cross};
}

/// d^2 eps / d lambda^2 by a central 3-point difference along the
/// family's scalar parameter. Negative at the positive-branch maximum,
/// positive at the spurious minimum.
inline double coupling_curvature(const Orbital &u, const CouplingSpec &spec,
                                 PotentialSpec V, double at_lambda,
                                 const Constants &k = {}) {
  // Escalate the step when the quotient is nearly flat on the natural
  // scale (e.g. at the spurious minimum, where the curvature is O(c^-2)
  // against values of O(c^2)).
  double h = std::max(1e-5 * std::abs(at_lambda), 1e-8);
  for (int attempt = 0; attempt < 5; ++attempt, h *= 10.0) {
    const double fm =
        energy(u, with_parameter(spec, at_lambda - h), V, k).eps_minus_mc2;
    const double f0 =
        energy(u, with_parameter(spec, at_lambda), V, k).eps_minus_mc2;
    const double fp =
        energy(u, with_parameter(spec, at_lambda + h), V, k).eps_minus_mc2;
    const double num = fp - 2.0 * f0 + fm;
    const double scale =
        std::max({std::abs(fp), std::abs(f0), std::abs(fm), 1.0});
    if (std::abs(num) >= 64.0 * 2.2e-16 * scale)
      return num / (h * h);
  }
  throw std::runtime_error(
      "coupling_curvature: finite-difference estimate is noise-dominated");
}

} // namespace diracmm
