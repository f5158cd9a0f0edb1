#pragma once

#include <cstdint>
#include <span>

namespace holegaf::stats {

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Two-sided standard normal quantile for the given confidence, e.g. 0.99 -> 2.5758.
double normal_two_sided_z(double confidence);

// Wilson score interval for hits/trials at the given two-sided confidence.
Interval wilson(std::uint64_t hits, std::uint64_t trials, double confidence);

// Kolmogorov-Smirnov statistic of the sample against a continuous CDF, and the
// asymptotic p-value (Stephens' small-sample correction).
struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

template <class Cdf>
KsResult ks_test(std::span<double> sample, Cdf cdf);

double kolmogorov_p_value(double statistic, std::size_t n);

// Running mean/variance (Welford).
struct RunningMoments {
  std::uint64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void push(double x) {
    ++count;
    double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }
  // Chan et al. pairwise merge; merging in a fixed order keeps results reproducible.
  void merge(const RunningMoments& o);
  double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
  double std_error() const;
};

}  // namespace holegaf::stats

#include <algorithm>
#include <cmath>

namespace holegaf::stats {

template <class Cdf>
KsResult ks_test(std::span<double> sample, Cdf cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return {d, kolmogorov_p_value(d, sample.size())};
}

}  // namespace holegaf::stats
