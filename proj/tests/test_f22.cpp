#include <doctest.h>

#include "cdpw/f22.hpp"
#include "test_util.hpp"

using namespace cdpw;
using namespace cdpw::f22;
using testutil::rel_err;

namespace {
const Complex I{0.0, 1.0};
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(f22_series({2.0, 1, I}), DomainError);
  CHECK_THROWS_AS(f22_series({2.0 + 1e-10, 1, I}), DomainError);
  CHECK_THROWS_AS(f22_form_b({0.5 + I, 1, 0.0}), DomainError);
  CHECK_THROWS_AS(f22_form_c({0.5 + I, -1, I}), DomainError);
  CHECK_THROWS_AS(f22_asymptotic({-0.5 + I, 1, 20.0 * I}), DomainError);
  CHECK_THROWS_AS(f22_asymptotic({3.5 + I, 1, 20.0 * I}), DomainError);
  CHECK_THROWS_AS(f22_asymptotic({0.5 + I, 1, 2.0 * I}), DomainError);
}

TEST_CASE("series") {
  CHECK(f22_series({0.3 + I, 4, 0.0}).value == Complex{1.0, 0.0});
  CHECK(rel_err(f22_series({0.5, 0, 1.0}).value, sf::kummer_m(0.5, 1.5, 1.0).value) < 1e-15);
  CHECK(rel_err(f22_series({1.0 + I, 2, -2.0 * I}).value,
                {0.80389791770707888, -0.12077469282068371}) < 1e-13);
  CHECK(rel_err(f22_series({1.0 + I, 3, -60.0 * I}).value,
                {0.37957226598924832, -0.52048027704553356}) < 1e-12);
}

TEST_CASE("form a") {
  const Complex a{0.7, 0.4};
  const Complex z{0.3, -1.2};
  CHECK(rel_err(f22_form_a({a, 0, z}).value, sf::kummer_m(a, a + 1.0, z).value) < 1e-14);
  CHECK(rel_err(f22_form_a({1.0 + 0.5 * I, 3, 2.0 * I}).value,
                {1.5758408583697833, -0.28682038629240784}) < 1e-10);
  CHECK(rel_err(f22_form_a({1.0 + I, 1, 1e-12 * I}).value, 1.0) < 1e-10);
  CHECK(f22_form_a({1.0 + I, 1, I}).method == Method::FormA);
}

TEST_CASE("form b") {
  const Complex a{0.7, 0.4};
  const Complex z{0.3, -1.2};
  const Complex l0 = sf::cpow(-z, -a) * a * sf::lower_inc_gamma(a, -z);
  CHECK(rel_err(f22_form_b({a, 0, z}).value, l0) < 1e-14);
  CHECK(rel_err(f22_form_b({a, 0, z}).value, sf::kummer_m(a, a + 1.0, z).value) < 1e-13);
  CHECK(rel_err(f22_form_b({1.0 - I, 2, -3.0 * I}).value,
                {0.72198356118724713, -1.6841368453006595}) < 1e-9);
  CHECK(rel_err(f22_form_b({0.5, 1, 1.0}).value, f22_form_a({0.5, 1, 1.0}).value) < 1e-12);
  CHECK(rel_err(f22_form_b({0.5, 1, 1.0}).value, 0.62106499006595395) < 1e-12);
  CHECK_FALSE(f22_form_b({1.0 - I, 2, -3.0 * I}).cancellation_warning);
}

TEST_CASE("split functions") {
  const Complex a{0.3, 0.8};
  CHECK(rel_err(kappa_plus(a, 0, 2.0 * I), sf::gamma_complex(a)) < 1e-15);
  CHECK(rel_err(kappa_plus(2.0 + 1e-30 * I, 1, -1.0), -3.0) < 1e-14);
  CHECK(rel_err(kappa_plus(1.0 + I, 2, 2.0 * I), {0.082915458032309968, -4.122492081642197}) <
        1e-13);
  CHECK(rel_err(kappa_minus(a, 0, 2.0 * I), -sf::kummer_u(1.0 - a, 1.0 - a, -2.0 * I)) < 1e-15);
  CHECK(rel_err(kappa_minus(1.0, 0, 3.0 * I), -1.0) < 1e-15);
  CHECK(rel_err(kappa_minus(1.0 + I, 1, -2.0 * I), {0.56696246624403039, 0.069613861186577206}) <
        1e-12);
  CHECK(rel_err(kappa_minus(1.0 + 0.5 * I, 4, 20.0 * I), {1.78073708748058, -1.371465566807573}) <
        1e-11);
}

TEST_CASE("form c") {
  const Complex a = 1.0 + I;
  for (int l = 0; l <= 4; ++l) {
    for (double s : {1.0, -1.0}) {
      for (double r : {0.5, 2.0, 10.0}) {
        const F22Args args{a, l, s * 2.0 * r * I};
        CHECK(rel_err(f22_form_c(args).value, f22_series(args).value) < 1e-9);
      }
    }
  }
  const Complex a2{0.6, 0.2};
  CHECK(rel_err(f22_form_c({a2, 0, 0.1 * I}).value, sf::kummer_m(a2, a2 + 1.0, 0.1 * I).value) <
        1e-9);
}

TEST_CASE("closed forms agree on random imaginary arguments") {
  testutil::Gen g(21);
  int compared = 0;
  for (int i = 0; i < 150; ++i) {
    const double gamma = g.uniform(0.2, 2.5) * (g.integer(0, 1) ? 1.0 : -1.0);
    const int l = g.integer(0, 5);
    const double y = g.uniform(1.0, 60.0) * (g.integer(0, 1) ? 1.0 : -1.0);
    const F22Args args{1.0 + gamma * I, l, y * I};
    const Complex ref = f22_series(args).value;
    CHECK(rel_err(f22_form_a(args).value, ref) < 1e-9);
    const EvalResult b = f22_form_b(args);
    const EvalResult c = f22_form_c(args);
    if (!b.cancellation_warning) CHECK(rel_err(b.value, ref) < 1e-9);
    if (!c.cancellation_warning) {
      CHECK(rel_err(c.value, ref) < 1e-9);
      ++compared;
    }
  }
  CHECK(compared > 120);
}

TEST_CASE("coefficients") {
  CHECK(d_coeffs_recursive(1.0 + I, 3, 0).d.at(0) == Complex{1.0, 0.0});
  const auto c = d_coeffs_recursive(1.0 + I, 1, 4);
  CHECK(c.d.size() == 5);
  CHECK(c.d[1] == Complex{-1.0, -0.5});
  CHECK(rel_err(d_coeffs_recursive(0.5, 0, 2).d[2], d_coeff_closed(0.5, 0, 2)) < 1e-15);
  CHECK(d_coeff_closed(0.3 + I, 2, 0) == Complex{1.0, 0.0});
  CHECK(rel_err(d_coeff_closed(0.3 + I, 0, 1), (1.0 - (0.3 + I)) / 2.0) < 1e-15);
  CHECK(rel_err(d_coeff_closed(1.0 + I, 2, 5), d_coeffs_recursive(1.0 + I, 2, 5).d[5]) < 1e-13);
}

TEST_CASE("coefficient engines agree on random parameters") {
  testutil::Gen g(22);
  for (int i = 0; i < 100; ++i) {
    const Complex a = g.off_lattice(0.1, 4.0, -3.0, 3.0, 0.05);
    const int l = g.integer(0, 6);
    const auto rec = d_coeffs_recursive(a, l, 20);
    for (int n = 0; n <= 20; ++n) CHECK(rel_err(rec.d[n], d_coeff_closed(a, l, n)) < 1e-11);
  }
}

TEST_CASE("asymptotic expansion") {
  // l = 0 check against the series where both are accurate.
  CHECK(rel_err(f22_asymptotic({0.5, 0, 50.0 * I}).value,
                {0.085903375647502359, 0.079002115498337341}) < 1e-8);
  // Term ratios follow the coefficient sequence.
  const Complex a = 1.0 + 0.5 * I;
  const Complex z = -30.0 * I;
  const auto p0 = f22_asymptotic_parts({a, 3, z}, 0);
  const auto p3 = f22_asymptotic_parts({a, 3, z}, 3);
  CHECK(p0.first == p3.first);
  Complex want = 0.0;
  const auto d = d_coeffs_recursive(a, 3, 3);
  for (int n = 0; n <= 3; ++n) want += d.d[n] * std::pow(2.0 / z, n);
  CHECK(rel_err(p3.second / p0.second, want) < 1e-13);
  // Remainder decays like |z|^{-N-1} relative to the O(1/|z|) prefactor.
  const F22Args near{a, 2, 20.0 * I}, far{a, 2, 40.0 * I};
  const double e20 = std::abs(f22_asymptotic(near, 4).value - f22_series(near).value);
  const double e40 = std::abs(f22_asymptotic(far, 4).value - f22_series(far).value);
  CHECK(e20 / e40 >= 16.0);
}

TEST_CASE("asymptotic error estimate") {
  for (int l : {0, 2, 5}) {
    for (double y : {10.0, 20.0, 30.0, 40.0}) {
      for (double s : {1.0, -1.0}) {
        const F22Args args{1.0 + s * I, l, -s * y * I};
        const EvalResult r = f22_asymptotic(args);
        const double err = std::abs(r.value - f22_series(args).value);
        CHECK(err <= 10.0 * r.err_estimate);
        CHECK(r.err_estimate <= 10.0 * err + 1e-14 * std::abs(r.value));
      }
    }
  }
}

TEST_CASE("divergence onset") {
  const F22Args args{1.0 + I, 2, 10.0 * I};
  try {
    f22_asymptotic(args, 60);
    FAIL("expected DivergenceOnset");
  } catch (const DivergenceOnset& e) {
    CHECK(e.requested() == 60);
    CHECK(e.optimal() > 3);
    CHECK(e.optimal() < 20);
  }
}

TEST_CASE("dominance follows the sign of Re z") {
  const Complex a = 1.0 + 0.5 * I;
  for (double t : {-1.2, -0.6, 0.6, 1.2}) {
    const Complex right = std::polar(25.0, t);
    const Complex left = std::polar(25.0, kPi - t);
    const auto pr = f22_asymptotic_parts({a, 2, right});
    const auto pl = f22_asymptotic_parts({a, 2, left});
    CHECK(std::abs(pr.second) > 1e3 * std::abs(pr.first));
    CHECK(std::abs(pl.second) < 1e-3 * std::abs(pl.first));
  }
}

TEST_CASE("identity residual") {
  CHECK(prop1_residual(0.4 + I, 0, 3.0 * I) == 0.0);
  CHECK(prop1_residual(1.0 + I, 3, 2.0 * I) < 1e-12);
  CHECK(prop1_residual(0.3, 5, -7.0 * I) < 1e-11);
  CHECK_THROWS_AS(prop1_residual(2.0, 3, I), DomainError);
  CHECK_NOTHROW(prop1_residual(5.0, 3, I));
  testutil::Gen g(23);
  for (int i = 0; i < 200; ++i) {
    const Complex a = g.off_lattice(-3.0, 4.0, -3.0, 3.0, 0.05);
    const Complex z = std::polar(g.uniform(0.2, 60.0), g.uniform(-kPi, kPi));
    CHECK(prop1_residual(a, g.integer(0, 5), z) < 1e-11);
  }
}

TEST_CASE("charge-less limit") {
  auto [n0, a0] = chargeless_limit(0, 1.0, 1e-6);
  CHECK(rel_err(a0, std::exp(1.0) - 1.0) < 1e-14);
  CHECK(rel_err(n0, a0) < 1e-5);
  auto [n1, a1] = chargeless_limit(1, 2.0 * I, 1e-5);
  CHECK(rel_err(a1, I * 2.0 * std::exp(I) * sf::spherical_bessel_j(1, -1.0)) < 1e-14);
  CHECK(rel_err(n1, a1) < 1e-4);
  auto [n2, a2] = chargeless_limit(2, -4.0 * I, 1e-6);
  CHECK(rel_err(n2, a2) < 1e-4);
  // Linear approach in eps.
  const double e4 = rel_err(chargeless_limit(3, 6.0 * I, 1e-4).first,
                            chargeless_limit(3, 6.0 * I, 1e-4).second);
  const double e5 = rel_err(chargeless_limit(3, 6.0 * I, 1e-5).first,
                            chargeless_limit(3, 6.0 * I, 1e-5).second);
  CHECK(e4 / e5 == doctest::Approx(10.0).epsilon(0.05));
  CHECK_THROWS_AS(chargeless_limit(1, I, 1e-3), DomainError);
}

TEST_CASE("auto routing") {
  RoutingThresholds thr;
  CHECK(f22_auto({1.0 + I, 2, 1.0 * I}, thr).method == Method::FormA);
  CHECK(f22_auto({1.0 + I, 2, 10.0 * I}, thr).method == Method::Series);
  CHECK(f22_auto({1.0 + I, 2, 40.0 * I}, thr).method == Method::FormC);
  CHECK(f22_auto({1.0 + I, 2, 80.0 * I}, thr).method == Method::Asymptotic);
  CHECK(f22_auto({1.0 + I, 30, 40.0 * I}, thr).method == Method::Series);
  CHECK(rel_err(f22_auto({1.0 + I, 3, -60.0 * I}).value,
                {0.37957226598924832, -0.52048027704553356}) < 1e-10);
}

TEST_CASE("cancelling closed forms stay accurate") {
  // Small |z| with large l: both parts of form c, and the terms of form a,
  // exceed the result by many orders of magnitude.
  for (double g : {0.25, 1.0, 2.0})
    for (int l : {3, 5, 8})
      for (double kr : {0.1, 0.5}) {
        const F22Args args{{1.0, g}, l, {0.0, -2.0 * kr}};
        const Complex ref = f22_series(args).value;
        const EvalResult c = f22_form_c(args);
        const EvalResult a = f22_form_a(args);
        CAPTURE(g);
        CAPTURE(l);
        CAPTURE(kr);
        CHECK_FALSE(c.cancellation_warning);
        CHECK_FALSE(a.cancellation_warning);
        CHECK(rel_err(c.value, ref) < 1e-12);
        CHECK(rel_err(a.value, ref) < 1e-12);
        CHECK(c.err_estimate < 1e-12 * std::abs(ref));
      }
  const Complex a{1.0, 0.5};
  const Complex z{0.0, 3.0};
  const Complex direct = kappa_plus(a, 2, z) + std::exp(z) * kappa_minus(a, 2, z);
  CHECK(rel_err(kappa_combination(a, 2, z).value, direct) < 1e-12);
  CHECK(rel_err(kummer_sum(a, 0, z).value, sf::kummer_m(a, a + 1.0, z).value / a) < 1e-14);
}

TEST_CASE("closed forms near an integer a") {
  struct Point {
    Complex a;
    Complex ref;
  };
  const Point points[] = {
      {{1.0007071067811866, 0.0007071067811865475}, {0.99984800373798992, 0.0071308050751666048}},
      {{1.0000707106781186, 7.071067811865475e-05}, {0.99965682468567856, 0.006957141077411933}},
      {{1.000007071067812, 7.0710678118654756e-06}, {0.99764775616811523, 0.0053127343357720627}},
  };
  for (const auto& p : points) {
    const F22Args args{p.a, 5, {0.0, -0.2}};
    CAPTURE(p.a);
    const EvalResult c = f22_form_c(args);
    CHECK_FALSE(c.cancellation_warning);
    CHECK(rel_err(c.value, p.ref) < 1e-13);
    CHECK(rel_err(f22_form_a(args).value, p.ref) < 1e-13);
    CHECK(rel_err(f22_form_b(args).value, p.ref) < 1e-13);
  }
}
