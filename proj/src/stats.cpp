#include "holegaf/stats.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "holegaf/errors.hpp"

namespace holegaf::stats {

double normal_two_sided_z(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error(ErrorKind::DomainError, "confidence must lie in (0,1)");
  boost::math::normal_distribution<double> normal;
  return boost::math::quantile(normal, 1.0 - 0.5 * (1.0 - confidence));
}

Interval wilson(std::uint64_t hits, std::uint64_t trials, double confidence) {
  if (trials == 0) return {0.0, 1.0};
  const double z = normal_two_sided_z(confidence);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval out{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (hits == 0) out.low = 0.0;
  if (hits == trials) out.high = 1.0;
  return out;
}

double kolmogorov_p_value(double statistic, std::size_t n) {
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * statistic;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

void RunningMoments::merge(const RunningMoments& o) {
  if (o.count == 0) return;
  if (count == 0) {
    *this = o;
    return;
  }
  const double n1 = static_cast<double>(count);
  const double n2 = static_cast<double>(o.count);
  const double delta = o.mean - mean;
  const double n = n1 + n2;
  mean += delta * n2 / n;
  m2 += o.m2 + delta * delta * n1 * n2 / n;
  count += o.count;
}

double RunningMoments::std_error() const {
  return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

}  // namespace holegaf::stats
