#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "diracmm/constants.hpp"

namespace diracmm {

/// One generalized Slater term coeff * r^power * exp(-zeta*r).
/// power > -3/2 keeps r^2 * term^2 integrable at the origin; weaker
/// integrability requirements (e.g. a 1/r potential moment) are enforced
/// by the individual integrals where they arise.
struct RadialTerm {
  double coeff;
  double power;
  double zeta;

  RadialTerm(double coeff_, double power_, double zeta_)
      : coeff(coeff_), power(power_), zeta(zeta_) {
    if (!(zeta > 0.0))
      throw std::domain_error("RadialTerm: zeta must be positive");
    if (!(power > -1.5))
      throw std::domain_error("RadialTerm: power must exceed -3/2");
  }
};

/// Finite sum of generalized Slater terms; closed under the derivative
/// and sigma.p maps used throughout.
struct RadialFunction {
  std::vector<RadialTerm> terms;

  explicit RadialFunction(std::vector<RadialTerm> t) : terms(std::move(t)) {
    if (terms.empty())
      throw std::domain_error("RadialFunction: needs at least one term");
  }

  static RadialFunction slater(double coeff, double power, double zeta) {
    return RadialFunction({RadialTerm(coeff, power, zeta)});
  }

  double operator()(double r) const {
    double v = 0.0;
    for (const auto &t : terms)
      v += t.coeff * std::pow(r, t.power) * std::exp(-t.zeta * r);
    return v;
  }

  RadialFunction scaled(double s) const {
    RadialFunction out = *this;
    for (auto &t : out.terms)
      t.coeff *= s;
    return out;
  }
};

/// Relativistic angular quantum number; kappa = 0 is unphysical.
struct SpinorChannel {
  int kappa;

  explicit SpinorChannel(int k) : kappa(k) {
    if (k == 0)
      throw std::domain_error("SpinorChannel: kappa must be nonzero");
  }
};

/// A radial function living in a definite kappa channel.
struct Orbital {
  RadialFunction radial;
  SpinorChannel channel;
};

/// Point-nucleus Coulomb potential e*Phi(r) = -Z/r.
struct PotentialSpec {
  double Z;

  explicit PotentialSpec(double Z_) : Z(Z_) {
    if (!(Z >= 0.0))
      throw std::domain_error("PotentialSpec: Z must be non-negative");
  }
};

/// gamma = sqrt(kappa^2 - (alpha Z)^2) / |kappa|, in (0, 1].
inline double gamma_kappa(SpinorChannel kappa, PotentialSpec V,
                          const Constants &k = {}) {
  const double az = k.alpha() * V.Z;
  const double ak = std::abs(static_cast<double>(kappa.kappa));
  if (!(az < ak))
    throw std::domain_error("gamma_kappa: alpha*Z >= |kappa|");
  return std::sqrt(ak * ak - az * az) / ak;
}

inline double gamma_kappa(double kappa_magnitude, PotentialSpec V,
                          const Constants &k = {}) {
  const double az = k.alpha() * V.Z;
  const double ak = std::abs(kappa_magnitude);
  if (!(az < ak))
    throw std::domain_error("gamma_kappa: alpha*Z >= |kappa|");
  return std::sqrt(ak * ak - az * az) / ak;
}

/// Radial reduction of sigma.p acting on an upper-channel function:
///   g(r) = f'(r) + (1 + kappa) f(r) / r,   channel kappa -> -kappa.
/// Term-by-term: c r^p -> c(p+1+kappa) r^(p-1) - c zeta r^p.
inline Orbital sigma_p_apply(const RadialFunction &f, SpinorChannel kappa) {
  std::vector<RadialTerm> out;
  out.reserve(2 * f.terms.size());
  const double kap = kappa.kappa;
  for (const auto &t : f.terms) {
    const double c1 = t.coeff * (t.power + 1.0 + kap);
    if (c1 != 0.0) {
      if (!(t.power - 1.0 > -1.5))
        throw std::domain_error(
            "sigma_p_apply: produced power <= -3/2 (not normalizable)");
      out.emplace_back(c1, t.power - 1.0, t.zeta);
    }
    out.emplace_back(-t.coeff * t.zeta, t.power, t.zeta);
  }
  return Orbital{RadialFunction(std::move(out)), SpinorChannel(-kappa.kappa)};
}

inline Orbital sigma_p_apply(const Orbital &f) {
  return sigma_p_apply(f.radial, f.channel);
}

/// Four-component trial in radial form: psi = (u, l).
struct SpinorTrial {
  Orbital upper;
  Orbital lower;
};

/// Radial realization of psi_C = i gamma_y psi^*: swap components,
/// negate both kappas, flip the sign of one component.
inline SpinorTrial charge_conjugate(const SpinorTrial &t) {
  return SpinorTrial{
      Orbital{t.lower.radial, SpinorChannel(-t.lower.channel.kappa)},
      Orbital{t.upper.radial.scaled(-1.0),
              SpinorChannel(-t.upper.channel.kappa)}};
}

} // namespace diracmm
