#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "holegaf/coeffs.hpp"
#include "holegaf/gaf.hpp"

namespace holegaf {

inline constexpr std::uint64_t kDefaultKInit = 64;
inline constexpr std::uint64_t kDefaultKCap = std::uint64_t{1} << 20;

// ---------------------------------------------------------------------------
// Certified circle scans

struct MinModulus {
  double lower_bound = 0.0;
  double grid_min = 0.0;
  std::uint64_t K_used = 0;
};

// grid_min over K equispaced points of the rho-circle minus
// derivative_sup_bound * (pi rho / K); K doubles until the bound exceeds
// grid_min / 2 or K passes K_cap. The best bound found is returned.
MinModulus min_modulus_certified(const GafSample& s, double rho, std::uint64_t K_init = kDefaultKInit,
                                 std::uint64_t K_cap = kDefaultKCap);

// Zero count of the truncated polynomial in the open rho-disk by the argument
// principle, or nullopt when the grid cannot be certified by K_cap.
std::optional<int> winding_number_certified(const GafSample& s, double rho, std::uint64_t K_init = kDefaultKInit,
                                            std::uint64_t K_cap = kDefaultKCap);

enum class HoleOutcome { HoleCertified, ZeroCertified, Inconclusive };
const char* to_string(HoleOutcome o) noexcept;

struct HoleDecision {
  HoleOutcome outcome = HoleOutcome::Inconclusive;
  int zero_count = 0;  // ZeroCertified only
  std::string reason;  // Inconclusive only
  double margin = 0.0;  // certified min modulus minus tail bound
  std::uint64_t grid_size_used = 0;

  bool operator==(const HoleDecision&) const = default;
};

// Rouche transfer: when the certified min of |p| on the r-circle exceeds
// tail_bound >= sup |F - p|, F and p have the same zeros in the disk.
HoleDecision hole_decision(const GafSample& s, double r, double tail_bound, std::uint64_t K_init = kDefaultKInit,
                           std::uint64_t K_cap = kDefaultKCap);

// ---------------------------------------------------------------------------
// Estimators

enum class EstimateMode { Direct, ThresholdLower, TiltedLower };
const char* to_string(EstimateMode m) noexcept;

struct EstimatorOptions {
  double tau_rel = kDefaultTauRel;
  double fail_exp = kDefaultFailExp;
  std::uint64_t K_init = kDefaultKInit;
  std::uint64_t K_cap = kDefaultKCap;
  // Refinement cap for the max-modulus certificates of the lower-bound modes.
  std::uint64_t K_cap_threshold = std::uint64_t{1} << 16;
  unsigned threads = 0;  // 0 = hardware concurrency
  double compute_cap = 1e11;  // trials * N_t
  SampleHooks hooks;
};

struct HoleEstimate {
  CoefficientModel model;
  double r = 0.0;
  EstimateMode mode = EstimateMode::Direct;
  std::uint64_t trials = 0;
  std::uint64_t hits = 0;
  std::uint64_t inconclusive = 0;
  double p_low = 0.0;
  double p_high = 1.0;
  double confidence = 0.99;
  std::optional<double> M;
  std::uint64_t seed = 0;
  double fail_exp = kDefaultFailExp;
  double tau_rel = kDefaultTauRel;
  std::uint64_t N_t = 0;
  double wall_time_s = 0.0;  // excluded from the determinism contract
  // Mode-specific diagnostics (certificate budget, log p_low, tilt data, ...).
  std::map<std::string, double> extra;

  double p_hat() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
};

HoleEstimate estimate_hole_direct(const CoefficientModel& model, double r, std::uint64_t trials, std::uint64_t seed,
                                  double confidence, const EstimatorOptions& opt = {});

struct ThresholdConstants {
  double eps = 0.05;    // 0 < L < 1
  double B = 3.0;       // L = 1
  double alpha = 0.75;  // L > 1
};

// Regime-dispatched threshold M(L, r).
double default_threshold(double L, double r, const ThresholdConstants& c = {});

// P[Hole(r)] >= P[|F(0)| > M] * P[max_{|z|=r} |F - F(0)| <= M].
HoleEstimate estimate_hole_lower_threshold(const CoefficientModel& model, double r, double M, std::uint64_t trials,
                                           std::uint64_t seed, double confidence, const EstimatorOptions& opt = {});

struct TiltPlan {
  double delta = 0.0;
  double log_inv_delta = 0.0;
  std::uint64_t N = 0;   // middle block 1..N
  std::uint64_t N1 = 0;  // end of the variance-flattening part
  double M = 0.0;
  double r2 = 0.0;
  double alpha1 = 0.0;
  double alpha1_cap = 0.0;
  std::vector<double> q_sq;  // index 0 unused; q_1^2..q_N^2
  double log_Q2 = 0.0;
  double sigma_q_sq_r2 = 0.0;
};

// Builds the tilt q_n for the L > 1 lower bound. alpha1 = nullopt picks the largest
// value with every q_n <= 1 and sigma_Q(r2)^2 <= 1/(4 delta).
TiltPlan make_tilt_plan(const CoefficientModel& model, double r, double alpha, std::optional<double> alpha1);

// p_low = e^{-M^2} Q^2 W2 W3, where W2 and W3 are Wilson lower bounds for the
// middle block (sampled from the tilted law) and the tail staying below M/2.
HoleEstimate tilted_lower_estimator(const CoefficientModel& model, double r, double alpha,
                                    std::optional<double> alpha1, std::uint64_t trials, std::uint64_t seed,
                                    double confidence, const EstimatorOptions& opt = {});

// Same estimator for an explicit plan (lets callers override the tilt).
HoleEstimate tilted_lower_with_plan(const CoefficientModel& model, double r, const TiltPlan& plan,
                                    std::uint64_t trials, std::uint64_t seed, double confidence,
                                    const EstimatorOptions& opt = {});

// prod_{k>=1} (1 - r^{2k}): the exact hole probability for L = 1.
double determinantal_oracle(double r);
// Its logarithm, which stays finite where the product underflows.
double log_determinantal_oracle(double r);

// JSONL record for one estimate (deterministic fields only).
std::string estimate_to_jsonl(const HoleEstimate& e);

}  // namespace holegaf
