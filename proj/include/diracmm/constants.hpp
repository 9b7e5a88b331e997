#pragma once

#include <stdexcept>

namespace diracmm {

/// Physical constants in Hartree atomic units (hbar = m = e = 1).
/// The speed of light is overridable; alpha is always 1/c so the
/// invariant c = 1/alpha holds by construction.
struct Constants {
  double c = 137.035999084; // CODATA 2018

  static constexpr double mass = 1.0;

  constexpr double alpha() const { return 1.0 / c; }
  constexpr double mc2() const { return mass * c * c; }
};

inline Constants make_constants(double c) {
  if (!(c > 0.0))
    throw std::domain_error("speed of light must be positive");
  return Constants{c};
}

} // namespace diracmm
