#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace holegaf {

enum class ModelKind { Hyperbolic, PowerLaw, ConstantUnit, Explicit };

const char* to_string(ModelKind kind) noexcept;
ModelKind parse_model_kind(const std::string& name);

// The deterministic weights (a_n) of a Gaussian Taylor series
//   F(z) = sum_n zeta_n a_n z^n.
struct CoefficientModel {
  ModelKind kind = ModelKind::ConstantUnit;
  double L = 1.0;                   // Hyperbolic, PowerLaw
  std::vector<double> explicit_seq;  // Explicit, index 0 first

  static CoefficientModel hyperbolic(double L);
  static CoefficientModel power_law(double L);
  static CoefficientModel constant_unit();
  static CoefficientModel explicit_sequence(std::vector<double> seq);

  // Throws InvalidModel on L <= 0 or negative explicit entries.
  void validate() const;

  // True when (a_n) is non-increasing for every n.
  bool is_non_increasing() const;

  // Explicit models have finitely many non-zero terms.
  bool is_finite() const noexcept { return kind == ModelKind::Explicit; }

  std::string describe() const;
  bool operator==(const CoefficientModel&) const = default;
};

// log(a_n^2); -inf when a_n = 0. Hyperbolic uses the multiplicative recurrence
// a_{n+1}^2 = a_n^2 (L+n)/(n+1) accumulated in log space, so the cost is O(n).
double log_coefficient_sq(const CoefficientModel& model, std::uint64_t n);

// a_n. Throws IndexOutOfRange for Explicit models when n is past the sequence.
double coefficient(const CoefficientModel& model, std::uint64_t n);

// log(a_0^2), ..., log(a_{count-1}^2) in one pass. For Explicit models entries past
// the sequence are -inf.
std::vector<double> log_coefficient_sq_table(const CoefficientModel& model, std::size_t count);

// Sequential walker over the terms t_n = a_n^2 rho^{2n} with a certified geometric
// majorant for the remainder sum_{m>n} t_m.
//
// For every supported kind the ratio a_{m+1}^2/a_m^2 is monotone in m and tends to 1,
// so max(ratio_n, 1) * rho^2 dominates every later term ratio.
class TermWalker {
 public:
  TermWalker(const CoefficientModel& model, double rho);

  std::uint64_t index() const noexcept { return n_; }
  double log_term() const noexcept { return log_term_; }
  double term() const;
  void advance();

  // Upper bound on sum_{m > index()} t_m. +inf when no bound is available yet
  // (ratio majorant >= 1).
  double remainder_bound() const;

  // log of a ratio q with t_{m+1} <= q t_m for all m >= index(). +inf for Explicit.
  double majorant_log_ratio() const;

  // True when every later term is exactly zero (finite models past their end).
  bool exhausted() const noexcept;

 private:
  double next_log_ratio() const;

  const CoefficientModel* model_;
  double rho_;
  double log_rho_sq_;
  std::uint64_t n_ = 0;
  double log_a_sq_ = 0.0;
  double log_term_ = 0.0;
};

// sigma_F(r)^2 = sum_n a_n^2 r^{2n}. Closed form (1-r^2)^{-L} for Hyperbolic models,
// otherwise summed to a relative tail of 1e-14.
double sigma_sq(const CoefficientModel& model, double r);

// Direct summation regardless of kind (used to cross-check the closed form).
double sigma_sq_series(const CoefficientModel& model, double r, double rel_tail = 1e-14);

// S_F(r) = sum_n log_+(a_n^2 r^{2n}).
double s_planar(const CoefficientModel& model, double r);

}  // namespace holegaf
