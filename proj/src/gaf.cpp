#include "holegaf/gaf.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "holegaf/errors.hpp"
#include "holegaf/rng.hpp"
#include "model_json.hpp"

namespace holegaf {

GafSample GafSample::from_coefficients(std::vector<cplx> coeffs) {
  if (coeffs.empty()) coeffs.emplace_back(0.0);
  std::vector<double> moduli;
  moduli.reserve(coeffs.size());
  for (const cplx& c : coeffs) moduli.push_back(std::abs(c));
  GafSample s;
  s.model = CoefficientModel::explicit_sequence(std::move(moduli));
  s.trunc_degree = coeffs.size() - 1;
  s.coeffs = std::move(coeffs);
  return s;
}

std::uint64_t truncation_degree(const CoefficientModel& model, double rho, double tau_rel, std::uint64_t cap) {
  if (!(rho > 0.0 && rho < 1.0)) {
    std::ostringstream os;
    os << "truncation radius must lie in (0,1), got " << rho;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
  if (!(tau_rel > 0.0)) throw Error(ErrorKind::DomainError, "tau_rel must be positive");
  if (tau_rel >= 1.0) return 0;

  const double target = tau_rel * tau_rel * sigma_sq(model, rho);
  // Walk far enough that the certified remainder is well below the target, then
  // rebuild the tail sums backwards so that no cancellation enters.
  std::vector<double> terms;
  TermWalker w(model, rho);
  double rem = 0.0;
  for (;;) {
    terms.push_back(w.term());
    if (w.exhausted()) {
      rem = 0.0;
      break;
    }
    rem = w.remainder_bound();
    if (rem <= 1e-3 * target) break;
    if (w.index() >= cap) {
      std::ostringstream os;
      os << "truncation degree exceeds cap " << cap;
      throw Error(ErrorKind::NoConvergence, os.str());
    }
    w.advance();
  }
  std::uint64_t n = terms.size() - 1;  // tail(n) = rem
  double tail = rem;
  while (n > 0 && tail + terms[n] <= target) {
    tail += terms[n];
    --n;
  }
  if (n > cap) throw Error(ErrorKind::NoConvergence, "truncation degree exceeds cap");
  return n;
}

std::vector<double> coefficient_table(const CoefficientModel& model, std::size_t count) {
  std::vector<double> a = log_coefficient_sq_table(model, count);
  for (double& v : a) v = std::exp(0.5 * v);
  return a;
}

GafSample sample(const CoefficientModel& model, std::uint64_t seed, std::uint64_t stream_id,
                 std::uint64_t trunc_degree, const SampleHooks& hooks) {
  GafSample s;
  s.model = model;
  s.trunc_degree = trunc_degree;
  s.seed = seed;
  s.stream_id = stream_id;
  const std::vector<double> a = coefficient_table(model, trunc_degree + 1);
  s.coeffs.resize(trunc_degree + 1);
  const rng::CounterRng gen(seed, stream_id, rng::Domain::Coefficients);
  for (std::uint64_t n = 0; n <= trunc_degree; ++n) {
    cplx zeta = hooks.zero_gaussians ? cplx{} : gen.complex_gaussian(n);
    s.coeffs[n] = zeta * a[n];
  }
  return s;
}

cplx horner(std::span<const cplx> coeffs, cplx z) noexcept {
  cplx acc{};
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * z + *it;
  return acc;
}

cplx evaluate(const GafSample& s, cplx z) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream os;
    os << "evaluation point must lie in the open unit disk, |z| = " << std::abs(z);
    throw Error(ErrorKind::InvalidPoint, os.str());
  }
  return horner(s.coeffs, z);
}

TailBound tail_high_prob_bound(const CoefficientModel& model, std::uint64_t trunc_degree, double rho,
                               double fail_exp) {
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(ErrorKind::InvalidRadius, "tail bound radius must lie in [0,1)");
  if (!(fail_exp > 0.0)) throw Error(ErrorKind::DomainError, "fail_exp must be positive");

  TailBound out;
  out.log_fail_prob = -fail_exp - std::log1p(-std::exp(-1.0));

  TermWalker w(model, rho);
  for (std::uint64_t n = 0; n <= trunc_degree; ++n) {
    if (w.exhausted()) return out;
    w.advance();
  }
  double sum = 0.0;
  for (std::uint64_t k = 1;; ++k) {
    double u = std::exp(0.5 * w.log_term()) * std::sqrt(static_cast<double>(k) + fail_exp);
    sum += u;
    if (w.exhausted()) break;
    double log_q = w.majorant_log_ratio();
    if (log_q < 0.0) {
      double growth = (static_cast<double>(k) + 1.0 + fail_exp) / (static_cast<double>(k) + fail_exp);
      double q = std::exp(0.5 * log_q) * std::sqrt(growth);
      if (q < 1.0) {
        double rem = u * q / (1.0 - q);
        if (rem <= 1e-16 * sum) {
          sum += rem;
          break;
        }
      }
    }
    if (k > kDefaultTruncationCap) throw Error(ErrorKind::NoConvergence, "tail bound series did not converge");
    w.advance();
  }
  out.bound = sum;
  return out;
}

double derivative_sup_bound(std::span<const cplx> coeffs, double rho) noexcept {
  double acc = 0.0;
  double power = 1.0;  // rho^{n-1}
  for (std::size_t n = 1; n < coeffs.size(); ++n) {
    acc += static_cast<double>(n) * std::abs(coeffs[n]) * power;
    power *= rho;
  }
  return acc;
}

double derivative_sup_bound(const GafSample& s, double rho) { return derivative_sup_bound(s.coeffs, rho); }

std::string to_jsonl(const GafSample& s) {
  nlohmann::ordered_json j;
  j["model"] = detail::model_to_json(s.model);
  j["seed"] = s.seed;
  j["stream_id"] = s.stream_id;
  j["N_t"] = s.trunc_degree;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const cplx& c : s.coeffs) arr.push_back({c.real(), c.imag()});
  j["coeffs"] = std::move(arr);
  return j.dump();
}

}  // namespace holegaf
