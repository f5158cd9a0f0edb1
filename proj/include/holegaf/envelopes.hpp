#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "holegaf/coeffs.hpp"

namespace holegaf {

// Asymptotic guide curves for -log P[Hole(r)]. All o(1) terms are dropped; these
// are never certificates.
enum class Regime { Sub1, Crit, Super1 };
const char* to_string(Regime r) noexcept;

struct BoundEnvelope {
  double L = 0.0;
  double r = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  Regime regime = Regime::Crit;
  std::string label = "asymptotic, o(1) omitted";
  // log(1/(1-r)) < 1: the asymptotic form is not yet meaningful.
  bool pre_asymptotic = false;
};

Regime regime_for(double L);

// Hyperbolic family:
//   L < 1: [(1-L)/2^{L+1}, (1-L)/2^L] (1-r)^{-L} log(1/(1-r))
//   L = 1: (pi^2/12)/(1-r)
//   L > 1: ((L-1)^2/4) (1-r)^{-1} log^2(1/(1-r))
BoundEnvelope theorem1_envelope(double L, double r);

// Non-increasing weights with a_0 = 1 and a_n of order n^{(L-1)/2}, L < 1:
//   [(1-L)/2, 1-L] sigma_F(r)^2 log(1/(1-r)).
// L defaults to the model's intensity and is required for Explicit models.
BoundEnvelope general_band_L_less_1(const CoefficientModel& model, double r, std::optional<double> L = std::nullopt);

// a_n of order 1: [c, C]/(1-r) for 1/2 <= r < 1.
BoundEnvelope theorem81_band(double r, double c = 0.1, double C = 10.0);

struct ChebyshevTerms {
  double delta = 0.0;
  double log_inv_delta = 0.0;
  double a = 0.0;
  double theta = 0.0;
  double kappa = 0.0;
  double r0 = 0.0;
  std::uint64_t N = 0;
  double threshold_term = 0.0;  // N theta (1/2 + a) log(1/delta)
  double log_det = 0.0;
  double log_Lambda = 0.0;
  double gamma_term = 0.0;  // N log Gamma(1 - theta/2)
  double exponent = 0.0;
  double normalized = 0.0;  // exponent / (delta^{-1} log^2(1/delta))
};

// Upper-bound exponent for the L > 1 hyperbolic family with N points on the
// r_0 = 1 - kappa delta circle, theta = 2 - a^2:
//   N theta (1/2 + a) log(1/delta) - log det Sigma + N (1 - theta/2) log Lambda + N log Gamma(1 - theta/2).
// Defaults: a = log(1/delta)^{-1/2}, kappa = 1 + delta, N = floor((L-1) log(1/delta) / (2 delta)).
ChebyshevTerms chebyshev_terms(double L, double r, std::optional<double> a_cfg = std::nullopt,
                               std::optional<double> kappa = std::nullopt);
double chebyshev_certificate(double L, double r, std::optional<double> a_cfg = std::nullopt,
                             std::optional<double> kappa = std::nullopt);

// CSV with columns L, r, regime, lower, upper.
std::string envelope_csv(const std::vector<BoundEnvelope>& rows);

}  // namespace holegaf
