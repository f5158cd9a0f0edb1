#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "holegaf/coeffs.hpp"

namespace holegaf {

using cplx = std::complex<double>;

struct LemmaCheckPoint {
  std::map<std::string, double> params;
  double measured = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// One lemma verified over a parameter grid. pass <=> every point passes.
struct LemmaCheckReport {
  std::string lemma_id;
  std::string relation;  // how measured compares to bound, e.g. "measured <= bound"
  std::vector<LemmaCheckPoint> points;
  std::map<std::string, double> config;
  bool pass = false;

  void add(LemmaCheckPoint p);
  std::string to_jsonl() const;
};

// ---- special functions -----------------------------------------------------

// E_1(x) = int_x^inf e^{-u}/u du; power series for x <= 1, continued fraction above.
double exp_integral_e1(double x);

// E|zeta|^{-theta} = Gamma(1 - theta/2) for 0 <= theta < 2.
double neg_moment_exact(double theta);

// E|w + zeta/t|^{-theta} by polar quadrature centred on the singular point -w.
// The kernel's radial singularity is integrated exactly through the substitution
// v = s^{2-theta}/(2-theta).
double neg_moment_quadrature(double theta, double t, cplx w);

// E log|1 + zeta/t| = E_1(t^2)/2.
double log_abs_moment_exact(double t);

// e^{-x} I_0(x) without overflow.
double scaled_bessel_i0(double x);

// ---- lemma checks ------------------------------------------------------------

// Plain Monte Carlo of E|zeta|^{-theta}; returns {mean, standard error}.
std::pair<double, double> neg_moment_mc(double theta, std::uint64_t draws, std::uint64_t seed, unsigned threads = 0);

struct Lemma17Constants {
  double c = 0.4;
  double C = 10.0;
};

// m(t, theta) = E|1 + zeta/t|^{-theta} <= 1 - c theta e^{-t^2}/(1+t^2) + C theta^2.
LemmaCheckReport lemma17_margin(double t, double theta, const Lemma17Constants& k = {});
LemmaCheckReport lemma17_grid(const std::vector<double>& ts, const std::vector<double>& thetas,
                              const Lemma17Constants& k = {});

// sup_w E|w + zeta/t|^{-theta} <= t^theta (1 + C theta) over a w-grid.
LemmaCheckReport lemma15_check(const std::vector<double>& thetas, const std::vector<double>& ts,
                               const std::vector<cplx>& ws, double C = 3.0);

// E log|1 + zeta/t| > e^{-t^2}/(2(t^2+1)).
LemmaCheckReport lemma16_5_check(const std::vector<double>& ts);

// MC estimates of E|log|1+zeta/t||^n / n!; reported, never failing.
LemmaCheckReport lemma16_growth(const std::vector<double>& ts, int n_max, std::uint64_t draws, std::uint64_t seed,
                                unsigned threads = 0);

// E prod_j |eta_j|^{-theta} <= (1/det Sigma) (Lambda^{1-theta/2} Gamma(1-theta/2))^N for the
// values eta_j = F(r e(j/N)), estimated by Monte Carlo through the circulant spectrum.
struct Lemma18Result {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;
  double log_bound = 0.0;
  bool pass = false;
};
Lemma18Result lemma18_mc(const CoefficientModel& model, double r, std::uint64_t N, double theta, std::uint64_t trials,
                         std::uint64_t seed, unsigned threads = 0);
LemmaCheckReport lemma18_check(const CoefficientModel& model, double r, std::uint64_t N, double theta,
                               std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);
// log of the right-hand side for given eigenvalues.
double lemma18_log_bound(const std::vector<double>& lambdas, double theta);
// Exact left-hand side when Sigma is diagonal with the given entries.
double lemma18_diagonal_exact(const std::vector<double>& lambdas, double theta);

// D = log|S(0)| - max_tau (1/k) sum_{j=1}^k log|S(tau w^j)|, tau over all k^2 deg-th
// roots of unity, w = e(1/k).
double lemma6_defect(const std::vector<cplx>& poly_coeffs, int k);
LemmaCheckReport lemma6_check(const std::vector<std::vector<cplx>>& polys, const std::vector<int>& ks, double C = 10.0);

// ---- coupling samplers -----------------------------------------------------

struct CouplingDraw {
  cplx zeta;
  bool in_event = false;
};

// zeta is standard complex Gaussian; P[in_event] = sigma^2 and, given in_event,
// zeta is complex Gaussian with variance sigma^2. The complement is drawn from
// the residual density by rejection from the standard law with acceptance
// 1 - exp(-|z|^2 (1/sigma^2 - 1)).
CouplingDraw gaussian_coupling_sample(double sigma, std::uint64_t seed, std::uint64_t stream);

struct GafCouplingDraw {
  std::vector<cplx> coeffs;  // zeta_n b_n
  bool in_event = false;
};

// Componentwise coupling with sigma_n = |c_n / b_n| for n = 0..N.
GafCouplingDraw gaf_coupling_sample(const std::vector<cplx>& b_seq, const std::vector<cplx>& c_seq, std::size_t N,
                                    std::uint64_t seed, std::uint64_t stream);

}  // namespace holegaf
