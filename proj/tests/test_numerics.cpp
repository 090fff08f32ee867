#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "holonomy/catalog.hpp"
#include "holonomy/quadrature.hpp"
#include "holonomy/rng.hpp"

using namespace holonomy;

TEST_CASE("gauss rules integrate polynomials of degree 2n-1", "[quadrature]") {
  for (int n : {2, 5, 8, 16}) {
    auto f = [n](double x) { return std::pow(x, 2 * n - 1) + 3 * std::pow(x, n); };
    IntegralResult r = integrate_1d(f, -1.0, 2.0, QuadConfig::fixed(n));
    double exact = (std::pow(2.0, 2 * n) - 1.0) / (2 * n) +
                   3 * (std::pow(2.0, n + 1) - std::pow(-1.0, n + 1)) / (n + 1);
    REQUIRE(r.value == Catch::Approx(exact).margin(1e-10));
  }
}

TEST_CASE("pullback of dphi around the unit circle", "[quadrature]") {
  QuadConfig quad;
  Form1 dphi = [](const Vec& p, const Vec& v) {
    return (p[0] * v[1] - p[1] * v[0]) / (p[0] * p[0] + p[1] * p[1]);
  };
  auto circle = [](double t) { return Vec{std::cos(t), std::sin(t)}; };
  IntegralResult r = integrate_pullback_1form(dphi, circle, 0.0, kTwoPi, quad);
  REQUIRE(r.value == Catch::Approx(kTwoPi).margin(1e-10));

  Form1 zero = [](const Vec&, const Vec&) { return 0.0; };
  REQUIRE(integrate_pullback_1form(zero, circle, 0.0, kTwoPi, quad).value == 0.0);

  Form1 tripled = [dphi](const Vec& p, const Vec& v) { return 3.0 * dphi(p, v); };
  IntegralResult r3 = integrate_pullback_1form(tripled, circle, 0.0, kTwoPi, quad);
  REQUIRE(r3.value == Catch::Approx(3 * r.value).margin(1e-10));
}

TEST_CASE("area form over a flat square", "[quadrature]") {
  QuadConfig quad;
  Form2 area = [](const Vec&, const Vec& a, const Vec& b) {
    return a[0] * b[1] - a[1] * b[0];
  };
  auto patch = [](double u, double v) { return Vec{u, v, 0}; };
  IntegralResult r = integrate_pullback_2form(area, patch, 0.0, 2.0, 0.0, 1.5, quad);
  REQUIRE(r.value == Catch::Approx(3.0).margin(1e-10));

  // orientation swap negates
  auto swapped = [](double u, double v) { return Vec{v, u, 0}; };
  IntegralResult rs = integrate_pullback_2form(area, swapped, 0.0, 1.5, 0.0, 2.0, quad);
  REQUIRE(rs.value == Catch::Approx(-3.0).margin(1e-10));
}

TEST_CASE("monopole flux through the sphere", "[quadrature]") {
  QuadConfig quad;
  for (int n : {1, 2}) {
    CatalogEntry geom = make_catalog_entry("sphere_monopole", {{"n", double(n)}}, false);
    const BundleData& bundle = *geom.bundle;
    Form2 f_form = [&](const Vec& p, const Vec& a, const Vec& b) {
      return bundle.F_analytic(0, p, a, b);
    };
    // (theta, phi) parametrization carries the outward orientation
    auto patch = [](double th, double ph) { return sphere_point(th, ph); };
    IntegralResult r =
        integrate_pullback_2form(f_form, patch, 0.0, std::numbers::pi, 0.0, kTwoPi, quad);
    REQUIRE(r.value == Catch::Approx(kTwoPi * n).margin(1e-6));
  }
}

TEST_CASE("3-form over bricks", "[quadrature]") {
  QuadConfig quad;
  Form3 vol = [](const Vec&, const Vec& a, const Vec& b, const Vec& c) {
    return 2.5 * det3(a, b, c);
  };
  auto block = [](double x, double y, double z) { return Vec{x, y, z}; };
  double lo[3] = {0, 0, 0}, hi[3] = {1, 1, 1};
  REQUIRE(integrate_pullback_3form(vol, block, lo, hi, quad).value ==
          Catch::Approx(2.5).margin(1e-10));

  Form3 zero = [](const Vec&, const Vec&, const Vec&, const Vec&) { return 0.0; };
  REQUIRE(integrate_pullback_3form(zero, block, lo, hi, quad).value == 0.0);

  // additivity over a split
  Form3 wavy = [](const Vec& p, const Vec& a, const Vec& b, const Vec& c) {
    return std::sin(3 * p[0] + p[1]) * det3(a, b, c);
  };
  double hi_l[3] = {0.37, 1, 1}, lo_r[3] = {0.37, 0, 0};
  double whole = integrate_pullback_3form(wavy, block, lo, hi, quad).value;
  double parts = integrate_pullback_3form(wavy, block, lo, hi_l, quad).value +
                 integrate_pullback_3form(wavy, block, lo_r, hi, quad).value;
  REQUIRE(whole == Catch::Approx(parts).margin(1e-10));
}

TEST_CASE("central differences", "[quadrature]") {
  auto sq = [](double t) { return t * t; };
  REQUIRE(central_diff(sq, 0.0, 1e-4) == Catch::Approx(0.0).margin(1e-12));

  auto sine = [](double t) { return std::sin(t); };
  double h = 1e-3;
  REQUIRE(central_diff(sine, 0.0, h) == Catch::Approx(1.0).margin(h * h / 6 + 1e-12));

  auto bilinear = [](double t, double u) { return t * u; };
  REQUIRE(central_diff_mixed(bilinear, 1e-3, 1e-3) == Catch::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrators are linear in the form", "[quadrature][property]") {
  QuadConfig quad;
  Rng rng(7);
  Form1 base = [](const Vec& p, const Vec& v) {
    return std::sin(p[0]) * v[1] + std::cos(p[1]) * v[0];
  };
  auto curve = [](double t) { return Vec{std::cos(t), std::sin(2 * t)}; };
  double i1 = integrate_pullback_1form(base, curve, 0.0, 1.7, quad).value;
  for (int k = 0; k < 5; ++k) {
    double c = rng.uniform(-4, 4);
    Form1 scaled = [base, c](const Vec& p, const Vec& v) { return c * base(p, v); };
    double ic = integrate_pullback_1form(scaled, curve, 0.0, 1.7, quad).value;
    REQUIRE(ic == Catch::Approx(c * i1).epsilon(1e-12).margin(1e-14));
  }
}

TEST_CASE("adaptive refinement reports a shrinking estimate", "[quadrature]") {
  auto f = [](double t) { return std::sin(40 * t) + std::exp(-t); };
  QuadConfig loose;
  loose.tol = 1e-6;
  QuadConfig tight;
  tight.tol = 1e-12;
  IntegralResult rl = integrate_1d(f, 0.0, 3.0, loose);
  IntegralResult rt = integrate_1d(f, 0.0, 3.0, tight);
  REQUIRE(rt.error_estimate <= rl.error_estimate + 1e-15);
  REQUIRE(std::abs(rt.value - rl.value) < 1e-6);
}
