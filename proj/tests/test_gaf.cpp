#include <cmath>
#include <numbers>

#include "doctest.h"

#include "holegaf/errors.hpp"
#include "holegaf/gaf.hpp"
#include "holegaf/stats.hpp"

using namespace holegaf;

namespace {

// Smallest N with sum_{n>N} t_n <= tau^2 sum_n t_n, by brute force over a long prefix.
std::uint64_t brute_truncation(const CoefficientModel& m, double rho, double tau, std::size_t len) {
  std::vector<double> t(len);
  double total = 0.0;
  for (std::size_t n = 0; n < len; ++n) total += t[n] = std::exp(log_coefficient_sq(m, n) + 2.0 * n * std::log(rho));
  double tail = 0.0;
  std::vector<double> tails(len);
  for (std::size_t n = len; n-- > 0;) {
    tails[n] = tail;  // sum over indices > n
    tail += t[n];
  }
  for (std::size_t n = 0; n < len; ++n)
    if (tails[n] <= tau * tau * total) return n;
  return len;
}

}  // namespace

TEST_CASE("truncation degree matches direct tail summation") {
  CHECK(truncation_degree(CoefficientModel::hyperbolic(2.0), 0.9, 1.0) == 0);
  auto c = CoefficientModel::constant_unit();
  // 0.25^{N+1} / 0.75 <= 1e-16 * 4/3  <=>  N + 1 >= 16 log 10 / log 4
  CHECK(truncation_degree(c, 0.5, 1e-8) == 26);
  CHECK(truncation_degree(c, 0.5, 1e-8) == brute_truncation(c, 0.5, 1e-8, 200));
  auto h = CoefficientModel::hyperbolic(2.0);
  CHECK(truncation_degree(h, 0.9, 1e-8) == brute_truncation(h, 0.9, 1e-8, 2000));
  auto q = CoefficientModel::hyperbolic(0.5);
  CHECK(truncation_degree(q, 0.99, 1e-6) == brute_truncation(q, 0.99, 1e-6, 20000));
  CHECK_THROWS_AS(truncation_degree(h, 1.0, 1e-6), Error);
}

TEST_CASE("samples are deterministic and shaped by the weights") {
  auto m = CoefficientModel::hyperbolic(1.5);
  GafSample a = sample(m, 11, 3, 20);
  GafSample b = sample(m, 11, 3, 20);
  CHECK(a.coeffs.size() == 21);
  CHECK(a.coeffs == b.coeffs);
  CHECK(sample(m, 11, 4, 20).coeffs != a.coeffs);
  CHECK(sample(m, 11, 3, 0).coeffs.size() == 1);
  // A longer truncation extends the same coefficients.
  GafSample longer = sample(m, 11, 3, 40);
  for (int n = 0; n <= 20; ++n) CHECK(longer.coeffs[n] == a.coeffs[n]);
}

TEST_CASE("coefficient variance over 1e4 samples") {
  auto m = CoefficientModel::hyperbolic(2.0);
  const int trials = 10000;
  const double a5sq = 6.0;
  stats::RunningMoments re, mod;
  for (int t = 0; t < trials; ++t) {
    GafSample s = sample(m, 5, t, 5);
    re.push(s.coeffs[5].real() * s.coeffs[5].real());
    mod.push(std::norm(s.coeffs[5]));
  }
  CHECK(re.mean / (a5sq / 2.0) == doctest::Approx(1.0).epsilon(4.0 / std::sqrt(trials) * std::sqrt(2.0)));
  CHECK(std::abs(mod.mean - a5sq) <= 3.0 * mod.std_error());
}

TEST_CASE("evaluation") {
  GafSample s = GafSample::from_coefficients({-0.1, 1.0});
  CHECK(std::abs(evaluate(s, 0.1)) < 1e-16);
  CHECK(evaluate(s, 0.0) == cplx(-0.1));
  CHECK_THROWS_AS(evaluate(s, cplx(0.6, 0.8)), Error);
  GafSample r = sample(CoefficientModel::hyperbolic(1.0), 2, 2, 30);
  GafSample g = r;
  g.coeffs[0] = 0.0;
  cplx z(0.3, -0.4);
  CHECK(std::abs(evaluate(r, z) - r.coeffs[0] - evaluate(g, z)) < 1e-14);
  // Rotating the point by e(1/N) equals rotating coefficient phases.
  const int N = 7;
  cplx w = std::polar(1.0, 2.0 * std::numbers::pi / N);
  GafSample rot = r;
  for (std::size_t n = 0; n < rot.coeffs.size(); ++n) rot.coeffs[n] *= std::pow(w, static_cast<double>(n));
  CHECK(std::abs(evaluate(r, z * w) - evaluate(rot, z)) < 1e-13);
}

TEST_CASE("empirical variance of F(r) matches the closed form") {
  auto m = CoefficientModel::hyperbolic(1.5);
  const double r = 0.6;
  const auto nt = truncation_degree(m, r, 1e-6);
  stats::RunningMoments mom;
  for (int t = 0; t < 10000; ++t) mom.push(std::norm(evaluate(sample(m, 9, t, nt), r)));
  CHECK(std::abs(mom.mean - sigma_sq(m, r)) <= 5.0 * mom.std_error());
}

TEST_CASE("tail bound") {
  auto c = CoefficientModel::constant_unit();
  const std::uint64_t nt = 10;
  TailBound tb = tail_high_prob_bound(c, nt, 0.5, 30.0);
  double direct = 0.0;
  for (int k = 1; k < 200; ++k) direct += std::pow(0.5, nt + k) * std::sqrt(k + 30.0);
  CHECK(tb.bound >= direct * (1.0 - 1e-12));
  CHECK(tb.bound <= direct * (1.0 + 1e-6));
  CHECK(tb.log_fail_prob == doctest::Approx(-30.0 - std::log(1.0 - std::exp(-1.0))));
  CHECK(tb.log_fail_prob == doctest::Approx(-29.541).epsilon(1e-4));
  CHECK(tail_high_prob_bound(c, nt + 1, 0.5).bound < tb.bound);
  auto h = CoefficientModel::hyperbolic(2.0);
  CHECK(tail_high_prob_bound(h, 50, 0.9).bound > tail_high_prob_bound(h, 60, 0.9).bound);
}

TEST_CASE("derivative bound") {
  CHECK(derivative_sup_bound(GafSample::from_coefficients({3.0}), 0.5) == 0.0);
  CHECK(derivative_sup_bound(GafSample::from_coefficients({0.0, 1.0}), 0.7) == doctest::Approx(1.0));
  CHECK(derivative_sup_bound(GafSample::from_coefficients({0.0, 0.0, 1.0}), 0.5) == doctest::Approx(1.0));
}

TEST_CASE("sample record") {
  std::string line = to_jsonl(GafSample::from_coefficients({1.0, cplx(0.0, 2.0)}));
  CHECK(line.find("\"coeffs\":[[1.0,0.0],[0.0,2.0]]") != std::string::npos);
  CHECK(line.find('\n') == std::string::npos);
}
