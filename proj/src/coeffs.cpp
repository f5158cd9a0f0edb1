#include "holegaf/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "holegaf/errors.hpp"

namespace holegaf {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(a_{n+1}^2 / a_n^2) for the closed-form kinds.
double closed_form_log_ratio(const CoefficientModel& m, std::uint64_t n) {
  switch (m.kind) {
    case ModelKind::Hyperbolic:
      return std::log1p((m.L - 1.0) / static_cast<double>(n + 1));
    case ModelKind::PowerLaw:
      if (n == 0) return 0.0;
      return (m.L - 1.0) * std::log1p(1.0 / static_cast<double>(n));
    case ModelKind::ConstantUnit:
      return 0.0;
    case ModelKind::Explicit:
      break;
  }
  return 0.0;
}

double explicit_log_sq(const CoefficientModel& m, std::uint64_t n) {
  if (n >= m.explicit_seq.size()) return kNegInf;
  double a = m.explicit_seq[n];
  return a > 0.0 ? 2.0 * std::log(a) : kNegInf;
}

void check_radius_open(double r) {
  if (!(r >= 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "radius must lie in [0,1), got " << r;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
}

}  // namespace

const char* to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::Hyperbolic: return "hyperbolic";
    case ModelKind::PowerLaw: return "power_law";
    case ModelKind::ConstantUnit: return "constant_unit";
    case ModelKind::Explicit: return "explicit";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& name) {
  if (name == "hyperbolic") return ModelKind::Hyperbolic;
  if (name == "power_law" || name == "powerlaw") return ModelKind::PowerLaw;
  if (name == "constant_unit" || name == "constant") return ModelKind::ConstantUnit;
  if (name == "explicit") return ModelKind::Explicit;
  throw Error(ErrorKind::InvalidModel, "unknown model kind '" + name + "'");
}

CoefficientModel CoefficientModel::hyperbolic(double L) {
  CoefficientModel m{ModelKind::Hyperbolic, L, {}};
  m.validate();
  return m;
}

CoefficientModel CoefficientModel::power_law(double L) {
  CoefficientModel m{ModelKind::PowerLaw, L, {}};
  m.validate();
  return m;
}

CoefficientModel CoefficientModel::constant_unit() { return {ModelKind::ConstantUnit, 1.0, {}}; }

CoefficientModel CoefficientModel::explicit_sequence(std::vector<double> seq) {
  CoefficientModel m{ModelKind::Explicit, 1.0, std::move(seq)};
  m.validate();
  return m;
}

void CoefficientModel::validate() const {
  if ((kind == ModelKind::Hyperbolic || kind == ModelKind::PowerLaw) && !(L > 0.0 && std::isfinite(L))) {
    std::ostringstream os;
    os << "intensity L must be positive, got " << L;
    throw Error(ErrorKind::InvalidModel, os.str());
  }
  if (kind == ModelKind::Explicit) {
    for (double a : explicit_seq) {
      if (!(a >= 0.0 && std::isfinite(a)))
        throw Error(ErrorKind::InvalidModel, "explicit coefficients must be finite and non-negative");
    }
  }
}

bool CoefficientModel::is_non_increasing() const {
  switch (kind) {
    case ModelKind::Hyperbolic:
    case ModelKind::PowerLaw:
      return L <= 1.0;
    case ModelKind::ConstantUnit:
      return true;
    case ModelKind::Explicit:
      return std::is_sorted(explicit_seq.rbegin(), explicit_seq.rend());
  }
  return false;
}

std::string CoefficientModel::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  if (kind == ModelKind::Hyperbolic || kind == ModelKind::PowerLaw) os << "(L=" << L << ")";
  if (kind == ModelKind::Explicit) os << "(len=" << explicit_seq.size() << ")";
  return os.str();
}

double log_coefficient_sq(const CoefficientModel& model, std::uint64_t n) {
  model.validate();
  switch (model.kind) {
    case ModelKind::Hyperbolic: {
      double acc = 0.0;
      for (std::uint64_t k = 0; k < n; ++k) acc += closed_form_log_ratio(model, k);
      return acc;
    }
    case ModelKind::PowerLaw:
      return n == 0 ? 0.0 : (model.L - 1.0) * std::log(static_cast<double>(n));
    case ModelKind::ConstantUnit:
      return 0.0;
    case ModelKind::Explicit:
      return explicit_log_sq(model, n);
  }
  return 0.0;
}

double coefficient(const CoefficientModel& model, std::uint64_t n) {
  if (model.kind == ModelKind::Explicit && n >= model.explicit_seq.size()) {
    std::ostringstream os;
    os << "index " << n << " past explicit sequence of length " << model.explicit_seq.size();
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  if (model.kind == ModelKind::Explicit) {
    model.validate();
    return model.explicit_seq[n];
  }
  return std::exp(0.5 * log_coefficient_sq(model, n));
}

std::vector<double> log_coefficient_sq_table(const CoefficientModel& model, std::size_t count) {
  model.validate();
  std::vector<double> out(count);
  if (model.kind == ModelKind::Explicit) {
    for (std::size_t n = 0; n < count; ++n) out[n] = explicit_log_sq(model, n);
    return out;
  }
  if (model.kind == ModelKind::PowerLaw) {
    for (std::size_t n = 0; n < count; ++n) out[n] = log_coefficient_sq(model, n);
    return out;
  }
  double acc = 0.0;
  for (std::size_t n = 0; n < count; ++n) {
    out[n] = acc;
    acc += closed_form_log_ratio(model, n);
  }
  return out;
}

// ---------------------------------------------------------------------------

TermWalker::TermWalker(const CoefficientModel& model, double rho)
    : model_(&model), rho_(rho), log_rho_sq_(2.0 * std::log(rho)) {
  model.validate();
  log_a_sq_ = model.kind == ModelKind::Explicit ? explicit_log_sq(model, 0) : 0.0;
  log_term_ = log_a_sq_;
}

double TermWalker::term() const { return std::exp(log_term_); }

double TermWalker::next_log_ratio() const { return closed_form_log_ratio(*model_, n_); }

void TermWalker::advance() {
  if (model_->kind == ModelKind::Explicit) {
    ++n_;
    log_a_sq_ = explicit_log_sq(*model_, n_);
  } else if (model_->kind == ModelKind::PowerLaw) {
    ++n_;
    log_a_sq_ = (model_->L - 1.0) * std::log(static_cast<double>(n_));
  } else {
    log_a_sq_ += next_log_ratio();
    ++n_;
  }
  log_term_ = log_a_sq_ + static_cast<double>(n_) * log_rho_sq_;
  if (rho_ == 0.0) log_term_ = kNegInf;
}

bool TermWalker::exhausted() const noexcept {
  return rho_ == 0.0 ||
         (model_->kind == ModelKind::Explicit && n_ + 1 >= model_->explicit_seq.size());
}

double TermWalker::majorant_log_ratio() const {
  if (model_->kind == ModelKind::Explicit) return std::numeric_limits<double>::infinity();
  // The log ratio is monotone in n from n = 1 on, so the larger of the next two
  // ratios (and 0, their common limit) bounds every later one.
  double lr = std::max({closed_form_log_ratio(*model_, n_), closed_form_log_ratio(*model_, n_ + 1), 0.0});
  return lr + log_rho_sq_;
}

double TermWalker::remainder_bound() const {
  if (exhausted()) return 0.0;
  if (model_->kind == ModelKind::Explicit) {
    double acc = 0.0;
    for (std::size_t m = n_ + 1; m < model_->explicit_seq.size(); ++m) {
      double a = model_->explicit_seq[m];
      acc += a * a * std::pow(rho_, 2.0 * static_cast<double>(m));
    }
    return acc;
  }
  double log_q = majorant_log_ratio();
  if (log_q >= 0.0) return std::numeric_limits<double>::infinity();
  double q = std::exp(log_q);
  // Next term is at most t_n * exp(ratio_n + log rho^2) <= t_n * q.
  return std::exp(log_term_) * q / (1.0 - q);
}

// ---------------------------------------------------------------------------

double sigma_sq_series(const CoefficientModel& model, double r, double rel_tail) {
  check_radius_open(r);
  TermWalker w(model, r);
  double sum = 0.0;
  for (;;) {
    sum += w.term();
    if (w.exhausted()) break;
    // The majorant is only checked once it is finite and the terms are decaying.
    double rem = w.remainder_bound();
    if (rem <= rel_tail * sum) {
      break;
    }
    w.advance();
    if (w.index() > 2'000'000'000ULL) throw Error(ErrorKind::NoConvergence, "sigma_sq series did not converge");
  }
  return sum;
}

double sigma_sq(const CoefficientModel& model, double r) {
  check_radius_open(r);
  model.validate();
  if (model.kind == ModelKind::Hyperbolic) return std::pow(1.0 - r * r, -model.L);
  return sigma_sq_series(model, r);
}

double s_planar(const CoefficientModel& model, double r) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "s_planar needs 0 < r < 1, got " << r;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
  TermWalker w(model, r);
  double sum = 0.0;
  for (;;) {
    double lt = w.log_term();
    if (lt > 0.0) sum += lt;
    // Past the maximizer the summand only decreases, so the first
    // non-positive summand ends the positive part.
    if (lt <= 0.0 && w.majorant_log_ratio() < 0.0) break;
    if (w.exhausted()) break;
    w.advance();
  }
  return sum;
}

}  // namespace holegaf
