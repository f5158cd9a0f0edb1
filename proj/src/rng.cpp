#include "holegaf/rng.hpp"

#include <cmath>
#include <numbers>

namespace holegaf::rng {

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, Domain domain) noexcept
    : key_(mix64(mix64(seed) ^ mix64(stream ^ (static_cast<std::uint64_t>(domain) * 0x9E3779B97F4A7C15ULL)))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept {
  return mix64(key_ ^ mix64(counter + 0x632BE59BD9B4E019ULL));
}

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>((bits(counter) >> 11) + 1) * 0x1.0p-53;
}

std::complex<double> CounterRng::complex_gaussian(std::uint64_t n) const noexcept {
  double u1 = uniform(2 * n);
  double u2 = uniform(2 * n + 1);
  double radius = std::sqrt(-std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

std::complex<double> CounterRng::next_complex_gaussian() noexcept {
  double u1 = next_uniform();
  double u2 = next_uniform();
  double radius = std::sqrt(-std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace holegaf::rng
