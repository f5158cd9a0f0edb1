#include <cmath>

#include "doctest.h"

#include "holegaf/coeffs.hpp"
#include "holegaf/errors.hpp"

using namespace holegaf;

TEST_CASE("hyperbolic weights follow the gamma ratio") {
  auto m = CoefficientModel::hyperbolic(2.5);
  CHECK(coefficient(m, 0) == doctest::Approx(1.0));
  CHECK(std::exp(log_coefficient_sq(m, 10)) == doctest::Approx(28.367725372314453).epsilon(1e-13));
  auto half = CoefficientModel::hyperbolic(0.5);
  CHECK(std::exp(log_coefficient_sq(half, 1000)) == doctest::Approx(0.017839011145854321).epsilon(1e-12));
  // L = 1 gives unit weights, L = 2 gives a_n^2 = n + 1.
  auto one = CoefficientModel::hyperbolic(1.0);
  for (int n : {0, 1, 7, 100}) CHECK(coefficient(one, n) == doctest::Approx(1.0));
  auto two = CoefficientModel::hyperbolic(2.0);
  for (int n : {0, 1, 7, 100}) CHECK(std::exp(log_coefficient_sq(two, n)) == doctest::Approx(n + 1.0).epsilon(1e-13));
}

TEST_CASE("power-law and explicit weights") {
  auto p = CoefficientModel::power_law(0.5);
  CHECK(coefficient(p, 0) == 1.0);
  CHECK(coefficient(p, 4) == doctest::Approx(std::pow(4.0, -0.25)));
  auto e = CoefficientModel::explicit_sequence({1.0, 0.5, 0.0, 0.25});
  CHECK(coefficient(e, 1) == 0.5);
  CHECK(std::isinf(log_coefficient_sq(e, 2)));
  CHECK_THROWS_AS(coefficient(e, 4), Error);
  try {
    coefficient(e, 4);
  } catch (const Error& err) {
    CHECK(err.kind() == ErrorKind::IndexOutOfRange);
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(CoefficientModel::hyperbolic(0.0), Error);
  CHECK_THROWS_AS(CoefficientModel::power_law(-1.0), Error);
  CHECK_THROWS_AS(CoefficientModel::explicit_sequence({1.0, -0.1}), Error);
  CHECK(parse_model_kind("hyperbolic") == ModelKind::Hyperbolic);
  CHECK_THROWS_AS(parse_model_kind("nope"), Error);
  CHECK(CoefficientModel::hyperbolic(0.5).is_non_increasing());
  CHECK_FALSE(CoefficientModel::hyperbolic(2.0).is_non_increasing());
  CHECK(CoefficientModel::explicit_sequence({1.0, 1.0, 0.5}).is_non_increasing());
  CHECK_FALSE(CoefficientModel::explicit_sequence({1.0, 2.0}).is_non_increasing());
}

TEST_CASE("variance against independent series") {
  auto m = CoefficientModel::hyperbolic(0.5);
  CHECK(sigma_sq(m, 0.9) == doctest::Approx(2.2941573387056179).epsilon(1e-13));
  CHECK(sigma_sq_series(m, 0.9) == doctest::Approx(2.2941573387056179).epsilon(1e-11));
  CHECK(sigma_sq(CoefficientModel::power_law(0.5), 0.6) == doctest::Approx(1.4910161766694829).epsilon(1e-12));
  CHECK(sigma_sq(CoefficientModel::constant_unit(), 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-13));
  CHECK(sigma_sq(m, 0.0) == 1.0);
  CHECK_THROWS_AS(sigma_sq(m, 1.0), Error);
  CHECK(sigma_sq(CoefficientModel::explicit_sequence({1.0, 2.0}), 0.5) == doctest::Approx(2.0));
}

TEST_CASE("planar functional") {
  CHECK(s_planar(CoefficientModel::hyperbolic(2.0), 0.9) == doctest::Approx(6.1159234105025237).epsilon(1e-12));
  CHECK(s_planar(CoefficientModel::hyperbolic(3.0), 0.99) == doctest::Approx(2463.055817396036).epsilon(1e-11));
  // a_n <= 1 and r < 1 leave nothing positive.
  CHECK(s_planar(CoefficientModel::hyperbolic(0.5), 0.99) == 0.0);
  CHECK(s_planar(CoefficientModel::constant_unit(), 0.5) == 0.0);
  CHECK_THROWS_AS(s_planar(CoefficientModel::hyperbolic(2.0), 0.0), Error);
}

TEST_CASE("term walker remainder bound dominates the true remainder") {
  auto m = CoefficientModel::hyperbolic(3.0);
  const double r = 0.8;
  TermWalker w(m, r);
  for (int i = 0; i < 40; ++i) w.advance();
  double bound = w.remainder_bound();
  double exact = 0.0;
  for (int n = 41; n < 2000; ++n) exact += std::exp(log_coefficient_sq(m, n) + 2.0 * n * std::log(r));
  CHECK(bound >= exact);
  CHECK(bound <= 3.0 * exact);
}
