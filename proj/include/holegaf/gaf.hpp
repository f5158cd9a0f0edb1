#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "holegaf/coeffs.hpp"

namespace holegaf {

using cplx = std::complex<double>;

inline constexpr std::uint64_t kDefaultTruncationCap = 10'000'000;
inline constexpr double kDefaultFailExp = 30.0;
inline constexpr double kDefaultTauRel = 1e-6;

// One realization of the truncated series sum_{n <= N_t} zeta_n a_n z^n.
struct GafSample {
  CoefficientModel model;
  std::uint64_t trunc_degree = 0;
  std::vector<cplx> coeffs;  // c_n = zeta_n a_n, size trunc_degree + 1
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  // Wraps a fixed coefficient vector (tests, planted zeros). The model is the
  // Explicit sequence of moduli.
  static GafSample from_coefficients(std::vector<cplx> coeffs);
};

struct SampleHooks {
  // Negative-control hook: every zeta_n is forced to 0.
  bool zero_gaussians = false;
};

// Smallest N with sum_{n>N} a_n^2 rho^{2n} <= tau_rel^2 sigma_F(rho)^2.
std::uint64_t truncation_degree(const CoefficientModel& model, double rho, double tau_rel,
                                std::uint64_t cap = kDefaultTruncationCap);

GafSample sample(const CoefficientModel& model, std::uint64_t seed, std::uint64_t stream_id,
                 std::uint64_t trunc_degree, const SampleHooks& hooks = {});

// sqrt of the table of a_n^2, n = 0..count-1.
std::vector<double> coefficient_table(const CoefficientModel& model, std::size_t count);

// Horner evaluation. Throws InvalidPoint for |z| >= 1.
cplx evaluate(const GafSample& s, cplx z);
cplx horner(std::span<const cplx> coeffs, cplx z) noexcept;

struct TailBound {
  double bound = 0.0;
  double log_fail_prob = 0.0;
};

// Bound on sup_{|z|=rho} |sum_{n>N_t} zeta_n a_n z^n| that holds outside an event
// of probability at most exp(-fail_exp)/(1-e^{-1}): it is the union bound over
// {|zeta_n| >= sqrt(n - N_t + fail_exp)}, each of probability e^{-(n-N_t+fail_exp)}.
TailBound tail_high_prob_bound(const CoefficientModel& model, std::uint64_t trunc_degree, double rho,
                               double fail_exp = kDefaultFailExp);

// sum_{n>=1} n |c_n| rho^{n-1}, which bounds |p'| on the closed disk of radius rho.
double derivative_sup_bound(const GafSample& s, double rho);
double derivative_sup_bound(std::span<const cplx> coeffs, double rho) noexcept;

// JSONL debugging record {model, seed, stream_id, N_t, coeffs: [[re, im], ...]}.
std::string to_jsonl(const GafSample& s);

}  // namespace holegaf
