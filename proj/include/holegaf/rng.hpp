#pragma once

#include <complex>
#include <cstdint>

namespace holegaf::rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, domain, counter), so trial t never depends on trials 0..t-1 and
// results are independent of how trials are scheduled across threads.
//
//   key   = mix(mix(seed) ^ mix(stream ^ domain * 0x9E37...))
//   bits  = mix(key ^ mix(counter + 0x632B...))
//
// where mix is the SplitMix64 finalizer. Uniforms take the top 53 bits and map
// to (0, 1]; complex Gaussians use Box-Muller on the pair of counters (2n, 2n+1):
//   zeta_n = sqrt(-log u1) * exp(2 pi i u2),
// which gives |zeta_n|^2 ~ Exp(1) and independent real/imaginary parts of
// variance 1/2.
enum class Domain : std::uint64_t {
  Coefficients = 0,
  SplitPrimary = 1,
  SplitSecondary = 2,
  TiltMiddle = 3,
  TiltTail = 4,
  Coupling = 5,
  Moments = 6,
  Polynomials = 7,
};

inline constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, Domain domain = Domain::Coefficients) noexcept;

  std::uint64_t bits(std::uint64_t counter) const noexcept;

  // Uniform on (0, 1].
  double uniform(std::uint64_t counter) const noexcept;

  // Standard complex Gaussian built from counters 2n and 2n+1.
  std::complex<double> complex_gaussian(std::uint64_t n) const noexcept;

  // Sequential draws for rejection samplers; starts at counter 0.
  double next_uniform() noexcept { return uniform(cursor_++); }
  std::complex<double> next_complex_gaussian() noexcept;

 private:
  std::uint64_t key_;
  std::uint64_t cursor_ = 0;
};

}  // namespace holegaf::rng
