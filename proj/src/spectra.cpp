#include "holegaf/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "holegaf/errors.hpp"

namespace holegaf {

namespace {

constexpr double kRelTail = 1e-14;
constexpr std::uint64_t kWalkCap = 4'000'000'000ULL;

void check_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "radius must lie in (0,1), got " << r;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
}

// log of the certified remainder after the walker's current index; +inf if none.
double log_remainder(const TermWalker& w) {
  if (w.exhausted()) return -std::numeric_limits<double>::infinity();
  double log_q = w.majorant_log_ratio();
  if (!(log_q < 0.0)) return std::numeric_limits<double>::infinity();
  return w.log_term() + log_q - std::log1p(-std::exp(log_q));
}

// Residue-class sums  sum_{n = m mod N, n >= first} t_n  for m = 0..N-1, kept in
// log-scaled form (ref_m + log(scaled_m)) so that tiny classes do not underflow.
struct ResidueSums {
  std::vector<double> ref;
  std::vector<double> scaled;

  double log_sum(std::size_t m) const { return ref[m] + std::log(scaled[m]); }
};

ResidueSums residue_sums(const CoefficientModel& model, double r, std::uint64_t N, std::uint64_t first,
                         std::vector<double>* head_log_terms) {
  ResidueSums out;
  out.ref.assign(N, std::numeric_limits<double>::quiet_NaN());
  out.scaled.assign(N, 0.0);
  TermWalker w(model, r);
  for (;;) {
    const std::uint64_t n = w.index();
    const double lt = w.log_term();
    if (head_log_terms != nullptr && n < first) head_log_terms->push_back(lt);
    if (n >= first) {
      const std::size_t m = n % N;
      if (std::isfinite(lt)) {
        if (std::isnan(out.ref[m])) out.ref[m] = lt;
        out.scaled[m] += std::exp(lt - out.ref[m]);
      }
    }
    const bool chunk_done = n + 1 >= first + N && (n + 1 - first) % N == 0;
    if (w.exhausted()) break;
    if (chunk_done) {
      double min_log = std::numeric_limits<double>::infinity();
      for (std::size_t m = 0; m < N; ++m) min_log = std::min(min_log, out.log_sum(m));
      if (log_remainder(w) <= std::log(kRelTail) + min_log) break;
    }
    if (n > kWalkCap) throw Error(ErrorKind::NoConvergence, "residue-class series did not converge");
    w.advance();
  }
  // Classes never reached (finite models) hold no mass.
  for (std::size_t m = 0; m < N; ++m) {
    if (std::isnan(out.ref[m])) {
      out.ref[m] = 0.0;
      out.scaled[m] = 0.0;
    }
  }
  return out;
}

}  // namespace

std::vector<double> CirculantSpectrum::normalized() const {
  std::vector<double> out(lambdas);
  for (double& v : out) v /= static_cast<double>(N);
  return out;
}

double CirculantSpectrum::min_lambda() const { return *std::min_element(lambdas.begin(), lambdas.end()); }

CirculantSpectrum circulant_eigenvalues(const CoefficientModel& model, double r, std::uint64_t N) {
  check_radius(r);
  if (N == 0) throw Error(ErrorKind::DomainError, "N must be positive");
  ResidueSums sums = residue_sums(model, r, N, 0, nullptr);
  CirculantSpectrum s;
  s.r = r;
  s.N = N;
  s.lambdas.resize(N);
  const double log_n = std::log(static_cast<double>(N));
  double max_log = -std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < N; ++m) {
    double ll = log_n + sums.log_sum(m);
    s.lambdas[m] = std::exp(ll);
    s.log_det += ll;
    max_log = std::max(max_log, ll);
  }
  s.Lambda_max = std::exp(max_log);
  return s;
}

std::string spectrum_csv(const CirculantSpectrum& s) {
  std::ostringstream os;
  os.precision(17);
  os << "m,lambda_m,cumulative_log_det\n";
  double cum = 0.0;
  for (std::size_t m = 0; m < s.lambdas.size(); ++m) {
    cum += std::log(s.lambdas[m]);
    os << m << ',' << s.lambdas[m] << ',' << cum << '\n';
  }
  return os.str();
}

Eigen::MatrixXcd covariance_matrix(const CoefficientModel& model, double r, std::uint64_t N) {
  check_radius(r);
  if (N == 0) throw Error(ErrorKind::DomainError, "N must be positive");
  if (N > kDenseCovarianceCap) {
    std::ostringstream os;
    os << "dense covariance limited to N <= " << kDenseCovarianceCap << ", got " << N;
    throw Error(ErrorKind::SizeCap, os.str());
  }
  std::vector<std::complex<double>> root(N);
  for (std::uint64_t k = 0; k < N; ++k) {
    double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(N);
    root[k] = {std::cos(angle), std::sin(angle)};
  }
  // c_d = sum_n t_n e(d n / N); Sigma_{jk} = c_{(j-k) mod N}.
  std::vector<std::complex<double>> c(N);
  TermWalker w(model, r);
  double diag = 0.0;
  for (;;) {
    const std::uint64_t n = w.index();
    const double t = w.term();
    const std::uint64_t step = n % N;
    std::uint64_t phase = 0;
    for (std::uint64_t d = 0; d < N; ++d) {
      c[d] += t * root[phase];
      phase += step;
      if (phase >= N) phase -= N;
    }
    diag += t;
    if (w.exhausted() || w.remainder_bound() <= kRelTail * diag) break;
    if (n > kWalkCap) throw Error(ErrorKind::NoConvergence, "covariance series did not converge");
    w.advance();
  }
  Eigen::MatrixXcd sigma(N, N);
  for (std::uint64_t j = 0; j < N; ++j) {
    for (std::uint64_t k = 0; k < N; ++k) {
      std::uint64_t d = (j + N - k) % N;
      sigma(j, k) = c[d];
    }
  }
  return sigma;
}

double SplitModel::b_at(std::uint64_t n) const {
  if (n >= N) return coefficient(base, n);
  return b.at(n);
}

double SplitModel::d_at(std::uint64_t n) const {
  if (n >= N) return 0.0;
  return d.at(n);
}

SplitModel split_coefficients(const CoefficientModel& model, double r0, std::uint64_t N) {
  check_radius(r0);
  if (N == 0) throw Error(ErrorKind::DomainError, "N must be positive");
  if (!model.is_non_increasing())
    throw Error(ErrorKind::NotMonotone, "splitting needs a non-increasing coefficient sequence, got " + model.describe());

  std::vector<double> head;  // log t_n for n < N
  ResidueSums tail = residue_sums(model, r0, N, N, &head);

  SplitModel s;
  s.base = model;
  s.r0 = r0;
  s.N = N;
  s.a.resize(N);
  s.b.assign(N, 0.0);
  s.d.assign(N, 0.0);
  const double log_r0_sq = 2.0 * std::log(r0);
  const double s0 = std::exp(tail.log_sum(0));
  for (std::uint64_t n = 0; n < N; ++n) s.a[n] = std::exp(0.5 * (head[n] - static_cast<double>(n) * log_r0_sq));
  for (std::uint64_t n = 1; n < N; ++n) {
    const double sn = std::exp(tail.log_sum(n));
    const double b_sq = std::max(0.0, s0 - sn) * std::exp(-static_cast<double>(n) * log_r0_sq);
    const double a_sq = s.a[n] * s.a[n];
    double d_sq = a_sq - b_sq;
    if (d_sq < 0.0) {
      s.max_clamp = std::max(s.max_clamp, -d_sq / a_sq);
      d_sq = 0.0;
    }
    s.b[n] = std::sqrt(b_sq);
    s.d[n] = std::sqrt(d_sq);
  }
  s.clamp_warning = s.max_clamp > 1e-12;
  s.sigma_g1_sq = static_cast<double>(N) * s0;
  return s;
}

SigmaGap sigma_g1_gap(const CoefficientModel& model, double r0, std::uint64_t N) {
  SplitModel split = split_coefficients(model, r0, N);
  SigmaGap g;
  g.sigma_f_sq = sigma_sq(model, r0);
  g.gap = std::max(0.0, g.sigma_f_sq - split.sigma_g1_sq);
  double power = 1.0;
  for (std::uint64_t n = 0; n < N; ++n) {
    g.comparison += split.a[n] * split.a[n] * power;
    power *= r0 * r0;
  }
  return g;
}

double principal_minor_min_eigen(const Eigen::MatrixXcd& sigma, const std::vector<std::size_t>& index_subset) {
  if (index_subset.empty()) throw Error(ErrorKind::EmptySubset, "principal minor needs a non-empty index set");
  const auto k = static_cast<Eigen::Index>(index_subset.size());
  Eigen::MatrixXcd minor(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      auto si = index_subset[static_cast<std::size_t>(i)];
      auto sj = index_subset[static_cast<std::size_t>(j)];
      if (si >= static_cast<std::size_t>(sigma.rows()) || sj >= static_cast<std::size_t>(sigma.cols()))
        throw Error(ErrorKind::IndexOutOfRange, "principal minor index outside the matrix");
      minor(i, j) = sigma(static_cast<Eigen::Index>(si), static_cast<Eigen::Index>(sj));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(minor, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace holegaf
