#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace holegaf::detail {

// Values of a polynomial and of its derivative at the K points rho e(k/K),
// computed with one inverse DFT each (coefficients folded modulo K).
struct CircleGrid {
  double rho = 0.0;
  std::uint64_t K = 0;
  std::vector<double> modulus;        // |p(z_k)|
  std::vector<double> deriv_modulus;  // |p'(z_k)|
  std::vector<std::complex<double>> values;
  double second_deriv_bound = 0.0;  // sum n(n-1)|c_n| rho^{n-2}
  double abs_sum = 0.0;             // sum |c_n| rho^n
  double slack = 0.0;               // floating-point allowance on each value

  double step() const;  // arc length between neighbours, 2 pi rho / K

  // Bound on |p(z) - p(z_k)| for z on the circle within arc distance s of z_k.
  double local_variation(std::size_t k, double s) const {
    return deriv_modulus[k] * s + 0.5 * second_deriv_bound * s * s + slack;
  }
};

CircleGrid scan_circle(std::span<const std::complex<double>> coeffs, double rho, std::uint64_t K);

// Winding number of the closed grid polygon; valid when every step satisfies
// local_variation(k, step) < modulus[k].
bool steps_certified(const CircleGrid& g);
int grid_winding(const CircleGrid& g);

// Certified min and max of |p| over the whole circle from local Taylor bounds.
double certified_min(const CircleGrid& g);
double certified_max(const CircleGrid& g);

}  // namespace holegaf::detail
