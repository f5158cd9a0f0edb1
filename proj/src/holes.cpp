#include "holegaf/holes.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"

#include "circle.hpp"
#include "holegaf/errors.hpp"
#include "holegaf/parallel.hpp"
#include "holegaf/rng.hpp"
#include "holegaf/stats.hpp"
#include "model_json.hpp"

namespace holegaf {

namespace {

void check_open_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "radius must lie in (0,1), got " << r;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
}

void check_estimate_args(std::uint64_t trials, double confidence) {
  if (trials == 0) throw Error(ErrorKind::DomainError, "trials must be at least 1");
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorKind::DomainError, "confidence must lie in (0,1)");
}

void check_budget(std::uint64_t trials, std::uint64_t n_t, const EstimatorOptions& opt) {
  const double work = static_cast<double>(trials) * static_cast<double>(n_t + 1);
  if (work > opt.compute_cap) {
    std::ostringstream os;
    os << "trials * N_t = " << work << " exceeds compute cap " << opt.compute_cap;
    throw Error(ErrorKind::ComputeBudgetExceeded, os.str());
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

enum class MaxCheck { Below, Above, Unresolved };

// Is sup_{|z|=rho} |p| + extra <= limit? Refines the grid until decided.
MaxCheck certify_max_below(std::span<const cplx> coeffs, double rho, double extra, double limit,
                           std::uint64_t K_init, std::uint64_t K_cap) {
  for (std::uint64_t K = K_init; K <= K_cap; K *= 2) {
    detail::CircleGrid g = detail::scan_circle(coeffs, rho, K);
    double grid_max = *std::max_element(g.modulus.begin(), g.modulus.end());
    if (grid_max + extra > limit) return MaxCheck::Above;
    if (detail::certified_max(g) + extra <= limit) return MaxCheck::Below;
  }
  return MaxCheck::Unresolved;
}

struct Counts {
  std::uint64_t hits = 0;
  std::uint64_t inconclusive = 0;
};

Counts sum_counts(const std::vector<Counts>& parts) {
  Counts total;
  for (const Counts& c : parts) {
    total.hits += c.hits;
    total.inconclusive += c.inconclusive;
  }
  return total;
}

}  // namespace

const char* to_string(HoleOutcome o) noexcept {
  switch (o) {
    case HoleOutcome::HoleCertified: return "hole";
    case HoleOutcome::ZeroCertified: return "zero";
    case HoleOutcome::Inconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(EstimateMode m) noexcept {
  switch (m) {
    case EstimateMode::Direct: return "direct";
    case EstimateMode::ThresholdLower: return "threshold_lower";
    case EstimateMode::TiltedLower: return "tilted_lower";
  }
  return "?";
}

MinModulus min_modulus_certified(const GafSample& s, double rho, std::uint64_t K_init, std::uint64_t K_cap) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidRadius, "min modulus radius must lie in [0,1)");
  if (K_init < 8) throw Error(ErrorKind::DomainError, "K_init must be at least 8");
  const double deriv = derivative_sup_bound(s, rho);
  MinModulus best{-std::numeric_limits<double>::infinity(), 0.0, K_init};
  for (std::uint64_t K = K_init; K <= K_cap; K *= 2) {
    detail::CircleGrid g = detail::scan_circle(s.coeffs, rho, K);
    const double grid_min = *std::min_element(g.modulus.begin(), g.modulus.end());
    const double lb = grid_min - deriv * (std::numbers::pi * rho / static_cast<double>(K));
    if (lb > best.lower_bound) best = {lb, grid_min, K};
    if (lb > 0.5 * grid_min) break;
  }
  return best;
}

std::optional<int> winding_number_certified(const GafSample& s, double rho, std::uint64_t K_init,
                                            std::uint64_t K_cap) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidRadius, "winding radius must lie in [0,1)");
  for (std::uint64_t K = K_init; K <= K_cap; K *= 2) {
    detail::CircleGrid g = detail::scan_circle(s.coeffs, rho, K);
    if (*std::min_element(g.modulus.begin(), g.modulus.end()) == 0.0) return std::nullopt;
    if (detail::steps_certified(g)) return detail::grid_winding(g);
  }
  return std::nullopt;
}

HoleDecision hole_decision(const GafSample& s, double r, double tail_bound, std::uint64_t K_init,
                           std::uint64_t K_cap) {
  if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidRadius, "hole radius must lie in [0,1)");
  HoleDecision d;
  double best_margin = -std::numeric_limits<double>::infinity();
  for (std::uint64_t K = K_init; K <= K_cap; K *= 2) {
    detail::CircleGrid g = detail::scan_circle(s.coeffs, r, K);
    d.grid_size_used = K;
    const double grid_min = *std::min_element(g.modulus.begin(), g.modulus.end());
    if (grid_min <= tail_bound) {
      // The grid minimum already bounds the true minimum from above.
      d.outcome = HoleOutcome::Inconclusive;
      d.reason = "grid minimum below tail bound";
      d.margin = grid_min - tail_bound;
      return d;
    }
    const double lb = detail::certified_min(g);
    best_margin = std::max(best_margin, lb - tail_bound);
    if (lb > tail_bound && detail::steps_certified(g)) {
      const int winding = detail::grid_winding(g);
      d.margin = lb - tail_bound;
      if (winding == 0) {
        d.outcome = HoleOutcome::HoleCertified;
      } else {
        d.outcome = HoleOutcome::ZeroCertified;
        d.zero_count = winding;
      }
      return d;
    }
  }
  d.outcome = HoleOutcome::Inconclusive;
  d.reason = "grid refinement cap reached";
  d.margin = best_margin;
  return d;
}

HoleEstimate estimate_hole_direct(const CoefficientModel& model, double r, std::uint64_t trials, std::uint64_t seed,
                                  double confidence, const EstimatorOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  check_open_radius(r);
  check_estimate_args(trials, confidence);
  const std::uint64_t n_t = truncation_degree(model, r, opt.tau_rel);
  check_budget(trials, n_t, opt);
  const TailBound tail = tail_high_prob_bound(model, n_t, r, opt.fail_exp);

  auto parts = map_trial_chunks<Counts>(trials, opt.threads, [&](std::uint64_t begin, std::uint64_t end) {
    Counts c;
    for (std::uint64_t t = begin; t < end; ++t) {
      GafSample s = sample(model, seed, t, n_t, opt.hooks);
      HoleDecision d = hole_decision(s, r, tail.bound, opt.K_init, opt.K_cap);
      if (d.outcome == HoleOutcome::HoleCertified) ++c.hits;
      if (d.outcome == HoleOutcome::Inconclusive) ++c.inconclusive;
    }
    return c;
  });
  const Counts total = sum_counts(parts);

  HoleEstimate e;
  e.model = model;
  e.r = r;
  e.mode = EstimateMode::Direct;
  e.trials = trials;
  e.hits = total.hits;
  e.inconclusive = total.inconclusive;
  e.confidence = confidence;
  e.seed = seed;
  e.fail_exp = opt.fail_exp;
  e.tau_rel = opt.tau_rel;
  e.N_t = n_t;
  // Inconclusive trials count as misses for the lower bound and hits for the upper.
  e.p_low = stats::wilson(total.hits, trials, confidence).low;
  e.p_high = stats::wilson(total.hits + total.inconclusive, trials, confidence).high;
  e.extra["tail_bound"] = tail.bound;
  e.extra["cert_failure_budget"] = static_cast<double>(trials) * std::exp(tail.log_fail_prob);
  e.wall_time_s = seconds_since(t0);
  return e;
}

double default_threshold(double L, double r, const ThresholdConstants& c) {
  if (!(L > 0.0)) throw Error(ErrorKind::InvalidIntensity, "L must be positive");
  check_open_radius(r);
  const double delta = 1.0 - r;
  const double log_inv = std::log(1.0 / delta);
  if (L < 1.0) return std::sqrt(1.0 - L + 2.0 * c.eps) * std::pow(1.0 - r * r, -0.5 * L) * std::sqrt(log_inv);
  if (L == 1.0) return c.B * std::sqrt(1.0 / delta);
  return std::pow(delta, -0.5) * std::pow(log_inv, c.alpha);
}

HoleEstimate estimate_hole_lower_threshold(const CoefficientModel& model, double r, double M, std::uint64_t trials,
                                           std::uint64_t seed, double confidence, const EstimatorOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  check_open_radius(r);
  check_estimate_args(trials, confidence);
  if (!(M > 0.0)) throw Error(ErrorKind::DomainError, "threshold M must be positive");
  const std::uint64_t n_t = truncation_degree(model, r, opt.tau_rel);
  check_budget(trials, n_t, opt);
  const TailBound tail = tail_high_prob_bound(model, n_t, r, opt.fail_exp);

  auto parts = map_trial_chunks<Counts>(trials, opt.threads, [&](std::uint64_t begin, std::uint64_t end) {
    Counts c;
    for (std::uint64_t t = begin; t < end; ++t) {
      GafSample s = sample(model, seed, t, n_t, opt.hooks);
      s.coeffs[0] = 0.0;  // G = F - F(0)
      MaxCheck m = certify_max_below(s.coeffs, r, tail.bound, M, opt.K_init, opt.K_cap_threshold);
      if (m == MaxCheck::Below) ++c.hits;
      if (m == MaxCheck::Unresolved) ++c.inconclusive;
    }
    return c;
  });
  const Counts total = sum_counts(parts);

  HoleEstimate e;
  e.model = model;
  e.r = r;
  e.mode = EstimateMode::ThresholdLower;
  e.trials = trials;
  e.hits = total.hits;
  e.inconclusive = total.inconclusive;
  e.confidence = confidence;
  e.M = M;
  e.seed = seed;
  e.fail_exp = opt.fail_exp;
  e.tau_rel = opt.tau_rel;
  e.N_t = n_t;
  // P[|a_0 zeta_0| > M] = exp(-M^2 / a_0^2).
  const double a0_sq = std::exp(log_coefficient_sq(model, 0));
  const double log_p_first = a0_sq > 0.0 ? -M * M / a0_sq : -std::numeric_limits<double>::infinity();
  const double w = stats::wilson(total.hits, trials, confidence).low;
  const double log_p_low = log_p_first + (w > 0.0 ? std::log(w) : -std::numeric_limits<double>::infinity());
  e.p_low = std::exp(log_p_low);
  e.p_high = 1.0;
  e.extra["log_p_low"] = std::max(log_p_low, -std::numeric_limits<double>::max());
  e.extra["q_low"] = w;
  e.extra["tail_bound"] = tail.bound;
  e.extra["cert_failure_budget"] = static_cast<double>(trials) * std::exp(tail.log_fail_prob);
  e.wall_time_s = seconds_since(t0);
  return e;
}

TiltPlan make_tilt_plan(const CoefficientModel& model, double r, double alpha, std::optional<double> alpha1) {
  if (model.kind != ModelKind::Hyperbolic || !(model.L > 1.0))
    throw Error(ErrorKind::IntensityOutOfRange, "tilted estimator needs a hyperbolic model with L > 1");
  check_open_radius(r);
  if (!(alpha > 0.5 && alpha < 1.0)) throw Error(ErrorKind::DomainError, "alpha must lie in (1/2, 1)");
  const double L = model.L;

  TiltPlan p;
  p.delta = 1.0 - r;
  p.log_inv_delta = std::log(1.0 / p.delta);
  p.N = static_cast<std::uint64_t>(std::floor(2.0 * L / p.delta * p.log_inv_delta));
  p.N1 = static_cast<std::uint64_t>(std::floor((L - 1.0) / (2.0 * p.delta) * p.log_inv_delta));
  p.N1 = std::min(p.N1, p.N);
  if (p.N == 0) throw Error(ErrorKind::DomainError, "middle block is empty at this radius");
  p.M = std::pow(p.delta, -0.5) * std::pow(p.log_inv_delta, alpha);
  p.r2 = r + p.delta * p.delta;

  const std::vector<double> log_a_sq = log_coefficient_sq_table(model, p.N + 1);
  const double log_r2_sq = 2.0 * std::log(p.r2);
  const double log_ell = std::log(p.log_inv_delta);
  std::vector<double> raw(p.N + 1, 0.0);
  double raw_max = 0.0;
  double sigma_raw = 0.0;
  for (std::uint64_t n = 1; n <= p.N; ++n) {
    const double log_term = log_a_sq[n] + static_cast<double>(n) * log_r2_sq;
    raw[n] = n <= p.N1 ? std::exp(-log_term - log_ell) : std::exp(-L * log_ell);
    raw_max = std::max(raw_max, raw[n]);
    sigma_raw += raw[n] * std::exp(log_term);
  }
  p.alpha1_cap = 1.0 / raw_max;
  if (alpha1) {
    if (!(*alpha1 > 0.0)) throw Error(ErrorKind::DomainError, "alpha1 must be positive");
    if (*alpha1 * raw_max > 1.0 + 1e-12) {
      std::ostringstream os;
      os << "alpha1 = " << *alpha1 << " makes some q_n exceed 1 (cap " << p.alpha1_cap << ")";
      throw Error(ErrorKind::TiltOutOfRange, os.str());
    }
    p.alpha1 = *alpha1;
  } else {
    p.alpha1 = std::min(p.alpha1_cap, 1.0 / (4.0 * p.delta * sigma_raw));
  }
  p.q_sq.assign(p.N + 1, 0.0);
  for (std::uint64_t n = 1; n <= p.N; ++n) {
    p.q_sq[n] = std::min(1.0, p.alpha1 * raw[n]);
    p.log_Q2 += std::log(p.q_sq[n]);
  }
  p.sigma_q_sq_r2 = p.alpha1 * sigma_raw;
  return p;
}

HoleEstimate tilted_lower_with_plan(const CoefficientModel& model, double r, const TiltPlan& plan,
                                    std::uint64_t trials, std::uint64_t seed, double confidence,
                                    const EstimatorOptions& opt) {
  const auto t0 = std::chrono::steady_clock::now();
  check_open_radius(r);
  check_estimate_args(trials, confidence);
  if (plan.q_sq.size() != plan.N + 1) throw Error(ErrorKind::DomainError, "tilt plan has inconsistent size");
  for (std::uint64_t n = 1; n <= plan.N; ++n) {
    if (!(plan.q_sq[n] > 0.0 && plan.q_sq[n] <= 1.0)) throw Error(ErrorKind::TiltOutOfRange, "q_n must lie in (0,1]");
  }
  const std::uint64_t n_t = std::max(plan.N, truncation_degree(model, r, opt.tau_rel));
  check_budget(trials, n_t, opt);
  const TailBound tail = tail_high_prob_bound(model, n_t, r, opt.fail_exp);
  const std::vector<double> a = coefficient_table(model, n_t + 1);
  std::vector<double> middle_weight(plan.N + 1, 0.0);
  for (std::uint64_t n = 1; n <= plan.N; ++n) middle_weight[n] = std::sqrt(plan.q_sq[n]) * a[n];
  const double half_m = 0.5 * plan.M;

  struct TiltCounts {
    Counts middle;
    Counts tail;
  };
  auto parts = map_trial_chunks<TiltCounts>(trials, opt.threads, [&](std::uint64_t begin, std::uint64_t end) {
    TiltCounts c;
    std::vector<cplx> mid(plan.N + 1);
    std::vector<cplx> far(n_t + 1);
    for (std::uint64_t t = begin; t < end; ++t) {
      const rng::CounterRng gm(seed, t, rng::Domain::TiltMiddle);
      for (std::uint64_t n = 1; n <= plan.N; ++n) {
        cplx zeta = opt.hooks.zero_gaussians ? cplx{} : gm.complex_gaussian(n);
        mid[n] = zeta * middle_weight[n];
      }
      MaxCheck m = certify_max_below(mid, r, 0.0, half_m, opt.K_init, opt.K_cap_threshold);
      if (m == MaxCheck::Below) ++c.middle.hits;
      if (m == MaxCheck::Unresolved) ++c.middle.inconclusive;

      const rng::CounterRng gt(seed, t, rng::Domain::TiltTail);
      for (std::uint64_t n = plan.N + 1; n <= n_t; ++n) {
        cplx zeta = opt.hooks.zero_gaussians ? cplx{} : gt.complex_gaussian(n);
        far[n] = zeta * a[n];
      }
      MaxCheck f = certify_max_below(far, r, tail.bound, half_m, opt.K_init, opt.K_cap_threshold);
      if (f == MaxCheck::Below) ++c.tail.hits;
      if (f == MaxCheck::Unresolved) ++c.tail.inconclusive;
    }
    return c;
  });
  Counts middle, far;
  for (const TiltCounts& c : parts) {
    middle.hits += c.middle.hits;
    middle.inconclusive += c.middle.inconclusive;
    far.hits += c.tail.hits;
    far.inconclusive += c.tail.inconclusive;
  }

  // Two one-sided bounds combined by Bonferroni.
  const double split_conf = 1.0 - 0.5 * (1.0 - confidence);
  const double w2 = stats::wilson(middle.hits, trials, split_conf).low;
  const double w3 = stats::wilson(far.hits, trials, split_conf).low;
  const double neg_inf = -std::numeric_limits<double>::infinity();
  double log_p_low = -plan.M * plan.M + plan.log_Q2 + (w2 > 0.0 ? std::log(w2) : neg_inf) +
                     (w3 > 0.0 ? std::log(w3) : neg_inf);

  HoleEstimate e;
  e.model = model;
  e.r = r;
  e.mode = EstimateMode::TiltedLower;
  e.trials = trials;
  e.hits = middle.hits;
  e.inconclusive = middle.inconclusive + far.inconclusive;
  e.confidence = confidence;
  e.M = plan.M;
  e.seed = seed;
  e.fail_exp = opt.fail_exp;
  e.tau_rel = opt.tau_rel;
  e.N_t = n_t;
  e.p_low = std::exp(log_p_low);
  e.p_high = 1.0;
  const double L = model.L;
  const double asymptotic = -0.25 * (L - 1.0) * (L - 1.0) / plan.delta * plan.log_inv_delta * plan.log_inv_delta;
  e.extra["log_p_low"] = std::max(log_p_low, -std::numeric_limits<double>::max());
  e.extra["log_Q2"] = plan.log_Q2;
  e.extra["alpha1"] = plan.alpha1;
  e.extra["N_block"] = static_cast<double>(plan.N);
  e.extra["N1"] = static_cast<double>(plan.N1);
  e.extra["middle_hits"] = static_cast<double>(middle.hits);
  e.extra["tail_hits"] = static_cast<double>(far.hits);
  e.extra["middle_low"] = w2;
  e.extra["tail_low"] = w3;
  e.extra["sigma_q_sq_r2"] = plan.sigma_q_sq_r2;
  e.extra["asymptotic_ratio"] = std::isfinite(log_p_low) ? log_p_low / asymptotic : 0.0;
  e.extra["tail_bound"] = tail.bound;
  e.extra["cert_failure_budget"] = static_cast<double>(trials) * std::exp(tail.log_fail_prob);
  e.wall_time_s = seconds_since(t0);
  return e;
}

HoleEstimate tilted_lower_estimator(const CoefficientModel& model, double r, double alpha,
                                    std::optional<double> alpha1, std::uint64_t trials, std::uint64_t seed,
                                    double confidence, const EstimatorOptions& opt) {
  TiltPlan plan = make_tilt_plan(model, r, alpha, alpha1);
  return tilted_lower_with_plan(model, r, plan, trials, seed, confidence, opt);
}

double log_determinantal_oracle(double r) {
  if (!(r >= 0.0 && r < 1.0)) throw Error(ErrorKind::InvalidRadius, "oracle radius must lie in [0,1)");
  if (r == 0.0) return 0.0;
  const double q = r * r;
  double log_prod = 0.0;
  double power = q;
  while (power >= 1e-16) {
    log_prod += std::log1p(-power);
    power *= q;
  }
  // The dropped factors contribute at most sum of the remaining powers.
  log_prod -= power / (1.0 - q);
  return log_prod;
}

double determinantal_oracle(double r) { return std::exp(log_determinantal_oracle(r)); }

std::string estimate_to_jsonl(const HoleEstimate& e) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(e.mode);
  j["model"] = detail::model_to_json(e.model);
  j["r"] = e.r;
  j["M"] = e.M ? nlohmann::ordered_json(*e.M) : nlohmann::ordered_json(nullptr);
  j["trials"] = e.trials;
  j["hits"] = e.hits;
  j["inconclusive"] = e.inconclusive;
  j["p_low"] = e.p_low;
  j["p_high"] = e.p_high;
  j["confidence"] = e.confidence;
  j["seed"] = e.seed;
  j["fail_exp"] = e.fail_exp;
  j["tau_rel"] = e.tau_rel;
  j["N_t"] = e.N_t;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  for (const auto& [k, v] : e.extra) extra[k] = v;
  j["extra"] = std::move(extra);
  return j.dump();
}

}  // namespace holegaf
