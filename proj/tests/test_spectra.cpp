#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "doctest.h"

#include "holegaf/errors.hpp"
#include "holegaf/rng.hpp"
#include "holegaf/spectra.hpp"

using namespace holegaf;

TEST_CASE("circulant eigenvalues: closed forms and trace") {
  auto m = CoefficientModel::hyperbolic(1.5);
  CHECK(circulant_eigenvalues(m, 0.7, 1).lambdas[0] == doctest::Approx(sigma_sq(m, 0.7)).epsilon(1e-13));
  for (auto model : {CoefficientModel::constant_unit(), CoefficientModel::hyperbolic(1.0)}) {
    const double r = 0.8;
    const std::uint64_t N = 12;
    auto s = circulant_eigenvalues(model, r, N);
    for (std::uint64_t k = 0; k < N; ++k)
      CHECK(s.lambdas[k] == doctest::Approx(N * std::pow(r, 2.0 * k) / (1.0 - std::pow(r, 2.0 * N))).epsilon(1e-13));
  }
  auto two = CoefficientModel::hyperbolic(2.0);
  auto s = circulant_eigenvalues(two, 0.8, 16);
  double trace = 0.0, logdet = 0.0;
  for (double l : s.lambdas) {
    trace += l;
    logdet += std::log(l);
  }
  CHECK(trace == doctest::Approx(16 * sigma_sq(two, 0.8)).epsilon(1e-12));
  CHECK(s.log_det == doctest::Approx(logdet).epsilon(1e-13));
  CHECK(s.Lambda_max == *std::max_element(s.lambdas.begin(), s.lambdas.end()));
  CHECK(s.normalized()[3] == doctest::Approx(s.lambdas[3] / 16));
  CHECK_THROWS_AS(circulant_eigenvalues(two, 1.0, 4), Error);
}

TEST_CASE("covariance matrix") {
  auto c = CoefficientModel::constant_unit();
  auto S2 = covariance_matrix(c, 0.6, 2);
  CHECK(S2(0, 1).real() == doctest::Approx(1.0 / (1.0 + 0.36)).epsilon(1e-13));
  CHECK(std::abs(S2(0, 1).imag()) < 1e-14);
  auto m = CoefficientModel::hyperbolic(1.5);
  const std::uint64_t N = 32;
  auto S = covariance_matrix(m, 0.7, N);
  for (std::uint64_t j = 0; j < N; ++j) CHECK(S(j, j).real() == doctest::Approx(sigma_sq(m, 0.7)).epsilon(1e-12));
  CHECK((S - S.adjoint()).norm() < 1e-12);
  auto spec = circulant_eigenvalues(m, 0.7, N);
  for (std::uint64_t k = 0; k < N; ++k) {
    Eigen::VectorXcd u(N);
    for (std::uint64_t j = 0; j < N; ++j)
      u[j] = std::polar(1.0 / std::sqrt(double(N)), 2.0 * std::numbers::pi * double(j * k % N) / N);
    CHECK((S * u - spec.lambdas[k] * u).norm() <= 1e-9 * spec.Lambda_max);
  }
  // Sorted eigenvalues from a dense solver agree with the circulant formula.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  std::vector<double> a(es.eigenvalues().data(), es.eigenvalues().data() + N), b = spec.lambdas;
  std::sort(b.begin(), b.end());
  for (std::uint64_t k = 0; k < N; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-9));
  CHECK_THROWS_AS(covariance_matrix(m, 0.5, 2048), Error);
}

TEST_CASE("L = 1 separation of the smallest eigenvalue") {
  for (std::uint64_t N : {8u, 32u, 64u}) {
    const double r = 0.9;
    auto s = circulant_eigenvalues(CoefficientModel::hyperbolic(1.0), r, N);
    CHECK(s.min_lambda() >= N * std::pow(r, 2.0 * (N - 1)) / (1.0 - std::pow(r, 2.0 * N)) * (1 - 1e-12));
  }
}

TEST_CASE("splitting identities") {
  for (auto model : {CoefficientModel::hyperbolic(0.5), CoefficientModel::constant_unit(),
                     CoefficientModel::power_law(0.3)}) {
    auto sm = split_coefficients(model, 0.96, 64);
    for (std::uint64_t n = 1; n < 64; ++n) {
      CHECK(sm.b[n] <= sm.a[n] * (1 + 1e-15));
      CHECK(sm.a[n] * sm.a[n] == doctest::Approx(sm.b[n] * sm.b[n] + sm.d[n] * sm.d[n]).epsilon(1e-12));
    }
    CHECK(sm.b_at(100) == doctest::Approx(coefficient(model, 100)));
    double sg = 0.0;
    for (std::uint64_t k = 1; k < 400; ++k)
      sg += std::exp(log_coefficient_sq(model, k * 64) + 2.0 * k * 64 * std::log(0.96));
    CHECK(sm.sigma_g1_sq == doctest::Approx(64 * sg).epsilon(1e-10));
  }
  // Unit weights: b_n^2 r0^{2n} = (1 - r0^{2n}) r0^{2N} / (1 - r0^{2N}).
  const double r0 = 0.9;
  const std::uint64_t N = 10;
  auto sm = split_coefficients(CoefficientModel::constant_unit(), r0, N);
  for (std::uint64_t n = 1; n < N; ++n) {
    double expect = (1 - std::pow(r0, 2.0 * n)) * std::pow(r0, 2.0 * N) / (1 - std::pow(r0, 2.0 * N));
    CHECK(sm.b[n] * sm.b[n] * std::pow(r0, 2.0 * n) == doctest::Approx(expect).epsilon(1e-12));
  }
  CHECK_THROWS_AS(split_coefficients(CoefficientModel::hyperbolic(2.0), 0.9, 8), Error);
}

TEST_CASE("sigma gap") {
  for (double L : {0.3, 0.5, 1.0})
    for (std::uint64_t N : {4u, 16u, 64u}) {
      auto g = sigma_g1_gap(CoefficientModel::hyperbolic(L), 0.95, N);
      CHECK(g.gap >= 0.0);
      CHECK(g.gap <= g.comparison * (1 + 1e-12));
    }
  const double delta = 0.01;
  auto N = static_cast<std::uint64_t>(std::ceil(std::pow(delta, -0.9)));
  auto g = sigma_g1_gap(CoefficientModel::hyperbolic(0.5), 1 - delta, N);
  // Far from small at this delta; reference value from an mpmath series.
  CHECK(g.gap / g.sigma_f_sq == doctest::Approx(0.77991455597002408).epsilon(1e-10));
  CHECK_THROWS_AS(sigma_g1_gap(CoefficientModel::hyperbolic(1.5), 0.9, 8), Error);
}

TEST_CASE("principal minors interlace") {
  auto S = covariance_matrix(CoefficientModel::constant_unit(), 0.9, 64);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S);
  const double full_min = es.eigenvalues().minCoeff();
  std::vector<std::size_t> all(64);
  for (std::size_t i = 0; i < 64; ++i) all[i] = i;
  CHECK(principal_minor_min_eigen(S, all) == doctest::Approx(full_min).epsilon(1e-9));
  CHECK(principal_minor_min_eigen(S, {5}) == doctest::Approx(S(5, 5).real()));
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    rng::CounterRng g(3, trial, rng::Domain::Polynomials);
    std::vector<std::size_t> idx = all;
    for (std::size_t i = 63; i > 0; --i) std::swap(idx[i], idx[g.bits(i) % (i + 1)]);
    idx.resize(32);
    CHECK(principal_minor_min_eigen(S, idx) >= full_min - 1e-9);
  }
  CHECK_THROWS_AS(principal_minor_min_eigen(S, {}), Error);
  CHECK_THROWS_AS(principal_minor_min_eigen(S, {64}), Error);
}
