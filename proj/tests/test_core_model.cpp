#include <catch2/catch_amalgamated.hpp>

#include "diracmm/diracmm.hpp"

using namespace diracmm;

TEST_CASE("constants default to CODATA c and derived alpha") {
  Constants k;
  CHECK(k.c == Catch::Approx(137.035999084).epsilon(0));
  CHECK(k.alpha() * k.c == Catch::Approx(1.0).margin(1e-16));
  CHECK(k.mc2() == Catch::Approx(k.c * k.c).epsilon(0));
  CHECK_THROWS_AS(make_constants(0.0), std::domain_error);
  CHECK_THROWS_AS(make_constants(-1.0), std::domain_error);
}

TEST_CASE("radial term validation") {
  CHECK_THROWS_AS(RadialTerm(1.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(RadialTerm(1.0, 0.0, -2.0), std::domain_error);
  CHECK_THROWS_AS(RadialTerm(1.0, -1.5, 1.0), std::domain_error);
  CHECK_NOTHROW(RadialTerm(1.0, -1.4, 1.0));
  CHECK_THROWS_AS(RadialFunction(std::vector<RadialTerm>{}),
                  std::domain_error);
  CHECK_THROWS_AS(SpinorChannel(0), std::domain_error);
  CHECK_THROWS_AS(PotentialSpec(-1.0), std::domain_error);
}

TEST_CASE("radial evaluation and scaling") {
  const RadialFunction f = RadialFunction::slater(2.0, 1.0, 0.5);
  CHECK(f(2.0) == Catch::Approx(2.0 * 2.0 * std::exp(-1.0)).epsilon(1e-15));
  const RadialFunction g = f.scaled(-0.5);
  CHECK(g(2.0) == Catch::Approx(-0.5 * f(2.0)).epsilon(1e-15));
}

TEST_CASE("gamma_kappa closed forms") {
  Constants k;
  PotentialSpec V1(1.0);
  CHECK(gamma_kappa(SpinorChannel(-1), V1, k) ==
        Catch::Approx(0.999973373968267).margin(1e-13));
  // gamma = sqrt(kappa^2 - (alpha Z)^2)/|kappa| in closed form
  PotentialSpec V90(90.0);
  const double az = k.alpha() * 90.0;
  CHECK(gamma_kappa(SpinorChannel(-1), V90, k) ==
        Catch::Approx(std::sqrt(1.0 - az * az)).epsilon(1e-15));
  CHECK(gamma_kappa(SpinorChannel(2), V90, k) ==
        Catch::Approx(std::sqrt(4.0 - az * az) / 2.0).epsilon(1e-15));
  // domain edge: alpha Z >= |kappa|
  CHECK_THROWS_AS(gamma_kappa(SpinorChannel(-1), PotentialSpec(138.0), k),
                  std::domain_error);
  CHECK_NOTHROW(gamma_kappa(SpinorChannel(-2), PotentialSpec(138.0), k));
  // monotone decreasing in Z for fixed kappa
  double prev = 1.0;
  for (double Z : {1.0, 10.0, 40.0, 80.0, 120.0}) {
    const double g = gamma_kappa(SpinorChannel(-1), PotentialSpec(Z), k);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("sigma_p_apply term algebra") {
  // c r^p e^(-z r) -> c(p+1+kappa) r^(p-1) - c z r^p, channel flips sign.
  const Orbital u{RadialFunction::slater(1.0, 1.0, 2.0), SpinorChannel(-1)};
  const Orbital g = sigma_p_apply(u);
  CHECK(g.channel.kappa == 1);
  REQUIRE(g.radial.terms.size() == 2);
  CHECK(g.radial.terms[0].coeff == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(g.radial.terms[0].power == Catch::Approx(0.0).margin(0));
  CHECK(g.radial.terms[1].coeff == Catch::Approx(-2.0).epsilon(1e-15));
  CHECK(g.radial.terms[1].power == Catch::Approx(1.0).margin(0));

  // pure 1s STO in kappa=-1: the r^(p-1) coefficient vanishes
  const Orbital s{RadialFunction::slater(1.0, 0.0, 1.5), SpinorChannel(-1)};
  const Orbital gs = sigma_p_apply(s);
  REQUIRE(gs.radial.terms.size() == 1);
  CHECK(gs.radial.terms[0].coeff == Catch::Approx(-1.5).epsilon(1e-15));
  CHECK(gs.radial.terms[0].power == 0.0);
}

TEST_CASE("sigma_p_apply reproduces <p^2> for hydrogenic trials") {
  // (sigma.p f, sigma.p f) equals the closed-form <p^2> of the trial.
  // For u = r^(n-1) e^(-z r), kappa=-1:
  //   <p^2>/<1> = z^2 (2n-1 - (n-1)(2n-1)/n + ... ) -- check against the
  // derivative form integral (f'^2 + l(l+1) f^2/r^2) r^2 dr numerically.
  for (double zeta : {0.5, 1.0, 3.0}) {
    for (double p : {0.0, 1.0, 2.0}) {
      const Orbital u{RadialFunction::slater(1.0, p, zeta), SpinorChannel(-1)};
      const Orbital g = sigma_p_apply(u);
      const double p2 = overlap(g.radial, g.radial);
      auto integrand = [&](double r) {
        // f' for a single term, l = 0 for kappa = -1
        const double f = u.radial(r);
        const double fp = (p / r - zeta) * f;
        return fp * fp * r * r;
      };
      const double ref = integrate_semi_infinite(integrand);
      CHECK(p2 == Catch::Approx(ref).epsilon(1e-12));
    }
  }
  // kappa = +1 has l = 1: centrifugal term enters
  const Orbital u{RadialFunction::slater(1.0, 1.0, 1.0), SpinorChannel(1)};
  const Orbital g = sigma_p_apply(u);
  auto integrand = [&](double r) {
    const double f = u.radial(r);
    const double fp = (1.0 / r - 1.0) * f;
    return (fp * fp + 2.0 * f * f / (r * r)) * r * r;
  };
  CHECK(overlap(g.radial, g.radial) ==
        Catch::Approx(integrate_semi_infinite(integrand)).epsilon(1e-12));
}

TEST_CASE("charge conjugation is norm-preserving and involutive") {
  const SpinorTrial t{
      Orbital{RadialFunction::slater(0.8, 0.0, 1.2), SpinorChannel(-1)},
      Orbital{RadialFunction::slater(0.1, 1.0, 0.9), SpinorChannel(1)}};
  const SpinorTrial c = charge_conjugate(t);
  CHECK(c.upper.channel.kappa == -t.lower.channel.kappa);
  CHECK(c.lower.channel.kappa == -t.upper.channel.kappa);
  const double n0 = overlap(t.upper.radial, t.upper.radial) +
                    overlap(t.lower.radial, t.lower.radial);
  const double n1 = overlap(c.upper.radial, c.upper.radial) +
                    overlap(c.lower.radial, c.lower.radial);
  CHECK(n1 == Catch::Approx(n0).epsilon(1e-14));
  const SpinorTrial cc = charge_conjugate(c);
  CHECK(cc.upper.channel.kappa == t.upper.channel.kappa);
  CHECK(cc.lower.channel.kappa == t.lower.channel.kappa);
  // psi_CC = -psi: both components flip sign
  for (double r : {0.3, 1.0, 4.0}) {
    CHECK(cc.upper.radial(r) ==
          Catch::Approx(-t.upper.radial(r)).margin(1e-14));
    CHECK(cc.lower.radial(r) ==
          Catch::Approx(-t.lower.radial(r)).margin(1e-14));
  }
}
