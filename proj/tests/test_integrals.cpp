#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "diracmm/diracmm.hpp"

using namespace diracmm;

TEST_CASE("moment closed forms") {
  // integral r^a e^(-s r) dr = Gamma(a+1)/s^(a+1)
  CHECK(moment(0.0, 1.0) == Catch::Approx(1.0).epsilon(1e-15));
  CHECK(moment(2.0, 1.0) == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(moment(2.0, 2.0) == Catch::Approx(0.25).epsilon(1e-14));
  CHECK(moment(0.5, 1.0) ==
        Catch::Approx(std::sqrt(M_PI) / 2.0).epsilon(1e-14));
  // non-integer exponent, frozen to high-precision Gamma
  CHECK(moment(0.99994675, 2.0) ==
        Catch::Approx(0.250003599459888580).epsilon(1e-14));
  CHECK_THROWS_AS(moment(-1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(moment(-1.2, 1.0), std::domain_error);
  CHECK_THROWS_AS(moment(1.0, 0.0), std::domain_error);
}

TEST_CASE("moment recurrence moment(a+1) = (a+1)/s moment(a)") {
  for (double a : {-0.5, 0.0, 0.37, 2.0, 7.25})
    for (double s : {0.1, 1.0, 13.0})
      CHECK(moment(a + 1.0, s) ==
            Catch::Approx((a + 1.0) / s * moment(a, s)).epsilon(1e-13));
}

TEST_CASE("overlap and potential closed forms") {
  // (e^-r, e^-r) r^2 dr = 2/8 = 1/4... Gamma(3)/2^3 = 2/8
  const RadialFunction f = RadialFunction::slater(1.0, 0.0, 1.0);
  CHECK(overlap(f, f) == Catch::Approx(0.25).epsilon(1e-14));
  PotentialSpec V(1.0);
  CHECK(potential_element(f, f, V) ==
        Catch::Approx(-0.25).epsilon(1e-14)); // -Gamma(2)/4
  // orthogonal channels give zero orbital overlap
  const Orbital a{f, SpinorChannel(-1)};
  const Orbital b{f, SpinorChannel(1)};
  CHECK(overlap(a, b) == 0.0);
  CHECK(overlap(a, a) == Catch::Approx(0.25).epsilon(1e-14));
  // Z = 0 short-circuits
  CHECK(potential_element(f, f, PotentialSpec(0.0)) == 0.0);
  // multi-term bilinearity
  const RadialFunction g(
      {RadialTerm(2.0, 1.0, 0.5), RadialTerm(-1.0, 0.0, 2.0)});
  const double direct = overlap(g, g);
  const double expanded = 4.0 * moment(4.0, 1.0) -
                          2.0 * 2.0 * moment(3.0, 2.5) + moment(2.0, 4.0);
  CHECK(direct == Catch::Approx(expanded).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature matches closed forms") {
  // exp decay
  auto f1 = [](double r) { return r * r * std::exp(-2.0 * r); };
  CHECK(integrate_semi_infinite(f1) == Catch::Approx(0.25).epsilon(1e-12));
  // slow tail
  auto f2 = [](double r) { return std::exp(-0.05 * r) * r; };
  CHECK(integrate_semi_infinite(f2) ==
        Catch::Approx(1.0 / (0.05 * 0.05)).epsilon(1e-12));
  // sharp peak
  auto f3 = [](double r) { return std::exp(-40.0 * (r - 3.0) * (r - 3.0)); };
  CHECK(integrate_semi_infinite(f3) ==
        Catch::Approx(std::sqrt(M_PI / 40.0)).epsilon(1e-11));
  QuadratureConfig bad;
  bad.rel_tol = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("resolvent element properties") {
  Constants k;
  const RadialFunction g = RadialFunction::slater(1.0, 0.0, 1.0);
  // Z = 0 reduction: the denominator r cancels one power, leaving
  // integral g^2 r^2 dr / w = (1/4) / w
  const double eps = 0.3 * k.mc2();
  const double direct = resolvent_element(g, eps, PotentialSpec(0.0), {}, k);
  CHECK(direct == Catch::Approx(0.25 / (eps + k.mc2())).epsilon(1e-12));
  // Z -> 0 limit is continuous
  const double near = resolvent_element(g, eps, PotentialSpec(1e-8), {}, k);
  CHECK(near == Catch::Approx(direct).epsilon(1e-10));
  // 10^6-point trapezoid oracle at Z = 1
  PotentialSpec V(1.0);
  const double quad = resolvent_element(g, eps, V, {}, k);
  {
    const double w = eps + k.mc2();
    double sum = 0.0;
    const double h = 60.0 / 1e6;
    for (long i = 1; i < 1000000; ++i) {
      const double r = h * double(i);
      const double gv = g(r);
      sum += gv * gv * r * r * r / (w * r + 1.0);
    }
    sum *= h;
    CHECK(quad == Catch::Approx(sum).margin(1e-10));
  }
  // monotone decreasing in eps
  CHECK(resolvent_element(g, 0.5 * k.mc2(), V, {}, k) < quad);
  // negative branch rejected
  CHECK_THROWS_AS(resolvent_element(g, -2.0 * k.mc2(), V, {}, k),
                  std::domain_error);
}

TEST_CASE("radial density is normalized and validated") {
  const SpinorTrial t{
      Orbital{RadialFunction::slater(1.0, 0.0, 1.0), SpinorChannel(-1)},
      Orbital{RadialFunction::slater(0.2, 0.0, 1.3), SpinorChannel(1)}};
  std::vector<double> grid;
  for (int i = 1; i <= 8000; ++i)
    grid.push_back(40.0 * double(i) / 8000.0);
  const std::vector<double> d = radial_density(t, grid);
  REQUIRE(d.size() == grid.size());
  // trapezoid integral of the density ~ 1
  double sum = 0.0;
  for (size_t i = 1; i < d.size(); ++i)
    sum += 0.5 * (d[i] + d[i - 1]) * (grid[i] - grid[i - 1]);
  CHECK(sum == Catch::Approx(1.0).margin(1e-8));
  for (double v : d)
    CHECK(v >= 0.0);
  CHECK_THROWS_AS(radial_density(t, {1.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(radial_density(t, {0.0, 0.5}), std::domain_error);
}
