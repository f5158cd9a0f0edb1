#include "circle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

namespace holegaf::detail {

namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays is.
// Plans are created unaligned so the same codelets run for every buffer.
fftw_plan backward_plan(std::uint64_t K) {
  static std::mutex mutex;
  static std::map<std::uint64_t, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = plans.find(K);
  if (it != plans.end()) return it->second;
  std::vector<std::complex<double>> in(K), out(K);
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(K), reinterpret_cast<fftw_complex*>(in.data()),
                                    reinterpret_cast<fftw_complex*>(out.data()), FFTW_BACKWARD,
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  plans.emplace(K, plan);
  return plan;
}

void inverse_dft(std::vector<std::complex<double>>& in, std::vector<std::complex<double>>& out) {
  fftw_plan plan = backward_plan(in.size());
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()), reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace

double CircleGrid::step() const { return 2.0 * std::numbers::pi * rho / static_cast<double>(K); }

CircleGrid scan_circle(std::span<const std::complex<double>> coeffs, double rho, std::uint64_t K) {
  CircleGrid g;
  g.rho = rho;
  g.K = K;
  std::vector<std::complex<double>> folded(K), folded_d(K), out(K);
  double power = 1.0;  // rho^n
  double d2 = 0.0;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    const std::complex<double> cn = coeffs[n] * power;
    folded[n % K] += cn;
    folded_d[n % K] += static_cast<double>(n) * cn;
    g.abs_sum += std::abs(cn);
    if (n >= 2) d2 += static_cast<double>(n) * static_cast<double>(n - 1) * std::abs(coeffs[n]) * power / (rho * rho);
    power *= rho;
  }
  g.second_deriv_bound = d2;
  inverse_dft(folded, out);
  g.values = out;
  g.modulus.resize(K);
  for (std::uint64_t k = 0; k < K; ++k) g.modulus[k] = std::abs(out[k]);
  inverse_dft(folded_d, out);
  g.deriv_modulus.resize(K);
  for (std::uint64_t k = 0; k < K; ++k) g.deriv_modulus[k] = rho > 0.0 ? std::abs(out[k]) / rho : 0.0;
  const double log2k = std::log2(static_cast<double>(std::max<std::uint64_t>(K, 2)));
  g.slack = 16.0 * std::numeric_limits<double>::epsilon() * (log2k + static_cast<double>(coeffs.size())) * g.abs_sum;
  return g;
}

bool steps_certified(const CircleGrid& g) {
  const double h = g.step();
  for (std::size_t k = 0; k < g.K; ++k) {
    if (!(g.local_variation(k, h) < g.modulus[k])) return false;
  }
  return true;
}

int grid_winding(const CircleGrid& g) {
  double total = 0.0;
  for (std::size_t k = 0; k < g.K; ++k) {
    const auto& a = g.values[k];
    const auto& b = g.values[(k + 1) % g.K];
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

double certified_min(const CircleGrid& g) {
  const double half = 0.5 * g.step();
  double lb = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < g.K; ++k) lb = std::min(lb, g.modulus[k] - g.local_variation(k, half));
  return lb;
}

double certified_max(const CircleGrid& g) {
  const double half = 0.5 * g.step();
  double ub = 0.0;
  for (std::size_t k = 0; k < g.K; ++k) ub = std::max(ub, g.modulus[k] + g.local_variation(k, half));
  return ub;
}

}  // namespace holegaf::detail
