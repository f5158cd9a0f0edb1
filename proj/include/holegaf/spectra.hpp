#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "holegaf/coeffs.hpp"

namespace holegaf {

// Eigenvalues of the covariance of (F(r e(j/N)))_{0<=j<N}:
//   lambda_m = N sum_{n = m mod N} a_n^2 r^{2n}.
// This is the canonical normalization; normalized() gives the Sigma/N view.
struct CirculantSpectrum {
  double r = 0.0;
  std::uint64_t N = 0;
  std::vector<double> lambdas;
  double log_det = 0.0;
  double Lambda_max = 0.0;

  std::vector<double> normalized() const;
  double min_lambda() const;
};

CirculantSpectrum circulant_eigenvalues(const CoefficientModel& model, double r, std::uint64_t N);

// CSV with columns m, lambda_m, cumulative log-det.
std::string spectrum_csv(const CirculantSpectrum& s);

inline constexpr std::uint64_t kDenseCovarianceCap = 1024;

// Sigma_{jk} = sum_n a_n^2 r^{2n} e((j-k) n / N), summed directly over n.
Eigen::MatrixXcd covariance_matrix(const CoefficientModel& model, double r, std::uint64_t N);

// Splitting G = G_1 + G_2 of F - F(0) at radius r_0 for non-increasing (a_n):
//   b_n^2 r_0^{2n} = sum_{k>=1} [a_{kN}^2 r_0^{2kN} - a_{kN+n}^2 r_0^{2(kN+n)}],  1 <= n < N,
//   b_n = a_n for n >= N, and a_n^2 = b_n^2 + d_n^2.
// The values of G_1 at the N points r_0 e(j/N) are then i.i.d. with variance
// sigma_g1_sq = N sum_{k>=1} a_{kN}^2 r_0^{2kN}.
struct SplitModel {
  CoefficientModel base;
  double r0 = 0.0;
  std::uint64_t N = 0;
  std::vector<double> a;  // a_0..a_{N-1}
  std::vector<double> b;  // index 0 unused (0), b_1..b_{N-1}
  std::vector<double> d;  // index 0 unused (0), d_1..d_{N-1}
  double sigma_g1_sq = 0.0;
  // Largest relative amount clipped when forcing a_n^2 - b_n^2 >= 0.
  double max_clamp = 0.0;
  bool clamp_warning = false;

  // b_n for any n >= 1 (falls back to a_n for n >= N).
  double b_at(std::uint64_t n) const;
  double d_at(std::uint64_t n) const;
};

SplitModel split_coefficients(const CoefficientModel& model, double r0, std::uint64_t N);

struct SigmaGap {
  double gap = 0.0;         // sigma_F^2(r_0) - sigma_{G_1}^2(r_0)
  double comparison = 0.0;  // sum_{n<N} a_n^2 r_0^{2n}
  double sigma_f_sq = 0.0;
};

SigmaGap sigma_g1_gap(const CoefficientModel& model, double r0, std::uint64_t N);

// Smallest eigenvalue of the principal submatrix on the given indices.
double principal_minor_min_eigen(const Eigen::MatrixXcd& sigma, const std::vector<std::size_t>& index_subset);

}  // namespace holegaf
