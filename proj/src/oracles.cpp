#include "holegaf/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "json.hpp"

#include "holegaf/errors.hpp"
#include "holegaf/parallel.hpp"
#include "holegaf/rng.hpp"
#include "holegaf/spectra.hpp"
#include "holegaf/stats.hpp"

namespace holegaf {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void require(bool ok, ErrorKind kind, const std::string& msg) {
  if (!ok) throw Error(kind, msg);
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

void LemmaCheckReport::add(LemmaCheckPoint p) {
  points.push_back(std::move(p));
  pass = std::all_of(points.begin(), points.end(), [](const LemmaCheckPoint& q) { return q.pass; });
}

std::string LemmaCheckReport::to_jsonl() const {
  nlohmann::ordered_json j;
  j["lemma_id"] = lemma_id;
  j["relation"] = relation;
  j["pass"] = pass;
  j["config"] = config;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json q;
    q["params"] = p.params;
    q["measured"] = p.measured;
    q["bound"] = p.bound;
    q["pass"] = p.pass;
    arr.push_back(std::move(q));
  }
  j["points"] = std::move(arr);
  return j.dump();
}

// ---------------------------------------------------------------------------

double exp_integral_e1(double x) {
  require(x > 0.0 && std::isfinite(x), ErrorKind::DomainError, "E1 needs x > 0, got " + fmt(x));
  if (x <= 1.0) {
    double sum = 0.0, term = 1.0;
    for (int k = 1; k < 200; ++k) {
      term *= -x / k;
      double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-17 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  // Modified Lentz on the continued fraction of e^x E1(x).
  constexpr double tiny = 1e-300;
  double b = x + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-x);
  }
  throw Error(ErrorKind::NoConvergence, "E1 continued fraction");
}

double neg_moment_exact(double theta) {
  require(theta >= 0.0 && theta < 2.0, ErrorKind::DomainError, "negative moment needs 0 <= theta < 2");
  return std::tgamma(1.0 - 0.5 * theta);
}

double scaled_bessel_i0(double x) {
  if (x < 0.0) x = -x;
  if (x < 500.0) return boost::math::cyl_bessel_i(0, x) * std::exp(-x);
  // e^{-x} I_0(x) ~ (2 pi x)^{-1/2} sum_k ((2k-1)!!)^2 / (k! (8x)^k)
  double sum = 1.0, term = 1.0;
  for (int k = 1; k < 8; ++k) {
    double odd = 2.0 * k - 1.0;
    term *= odd * odd / (k * 8.0 * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

double neg_moment_quadrature(double theta, double t, cplx w) {
  require(theta >= 0.0 && theta < 2.0, ErrorKind::DomainError, "quadrature needs 0 <= theta < 2");
  require(t > 0.0 && std::isfinite(t), ErrorKind::DomainError, "quadrature needs t > 0");
  // X = w + zeta/t has density (t^2/pi) e^{-t^2 |x-w|^2}; integrating the angle
  // around x = 0 leaves
  //   E|X|^{-theta} = 2 t^2 int_0^inf s^{1-theta} e^{-t^2 (s-|w|)^2} [e^{-x} I_0(x)]_{x = 2 t^2 s |w|} ds.
  const double aw = std::abs(w);
  const double t2 = t * t;
  auto smooth = [&](double s) { return std::exp(-t2 * (s - aw) * (s - aw)) * scaled_bessel_i0(2.0 * t2 * s * aw); };
  constexpr double reach = 9.0;  // e^{-81} is far below the error budget
  const double lo = std::max(0.0, aw - reach / t);
  const double hi = aw + reach / t;
  const double tol = 1e-13;
  double total = 0.0;
  if (lo == 0.0) {
    // Exact treatment of the s^{1-theta} factor: v = s^{p}/p with p = 2 - theta.
    const double p = 2.0 - theta;
    const double vmax = std::pow(hi, p) / p;
    auto fv = [&](double v) { return smooth(std::pow(p * v, 1.0 / p)); };
    boost::math::quadrature::tanh_sinh<double> ts;
    total = ts.integrate(fv, 0.0, vmax, tol);
  } else {
    auto fs = [&](double s) { return std::pow(s, 1.0 - theta) * smooth(s); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    total = GK::integrate(fs, lo, aw, 20, tol) + GK::integrate(fs, aw, hi, 20, tol);
  }
  return 2.0 * t2 * total;
}

double log_abs_moment_exact(double t) {
  require(t > 0.0 && std::isfinite(t), ErrorKind::DomainError, "log moment needs t > 0");
  return 0.5 * exp_integral_e1(t * t);
}

// ---------------------------------------------------------------------------

std::pair<double, double> neg_moment_mc(double theta, std::uint64_t draws, std::uint64_t seed, unsigned threads) {
  require(theta >= 0.0 && theta < 2.0, ErrorKind::DomainError, "negative moment needs 0 <= theta < 2");
  auto parts = map_trial_chunks<stats::RunningMoments>(draws, threads, [&](std::uint64_t b, std::uint64_t e) {
    stats::RunningMoments m;
    for (std::uint64_t i = b; i < e; ++i) {
      cplx z = rng::CounterRng(seed, i, rng::Domain::Moments).complex_gaussian(0);
      m.push(std::pow(std::norm(z), -0.5 * theta));
    }
    return m;
  });
  stats::RunningMoments total;
  for (const auto& p : parts) total.merge(p);
  return {total.mean, total.std_error()};
}

LemmaCheckReport lemma17_margin(double t, double theta, const Lemma17Constants& k) {
  require(t > 0.0, ErrorKind::DomainError, "lemma17 needs t > 0");
  require(theta >= 0.0 && theta <= 0.5, ErrorKind::DomainError, "lemma17 needs 0 <= theta <= 1/2");
  LemmaCheckReport rep;
  rep.lemma_id = "lemma17";
  rep.relation = "measured <= bound";
  rep.config = {{"c", k.c}, {"C", k.C}};
  LemmaCheckPoint p;
  p.params = {{"t", t}, {"theta", theta}};
  p.measured = neg_moment_quadrature(theta, t, cplx(1.0, 0.0));
  p.bound = 1.0 - k.c * theta * std::exp(-t * t) / (1.0 + t * t) + k.C * theta * theta;
  // theta = 0 is an equality; allow quadrature rounding only.
  p.pass = p.measured <= p.bound + 1e-12;
  rep.add(std::move(p));
  return rep;
}

LemmaCheckReport lemma17_grid(const std::vector<double>& ts, const std::vector<double>& thetas,
                              const Lemma17Constants& k) {
  LemmaCheckReport rep;
  rep.lemma_id = "lemma17";
  rep.relation = "measured <= bound";
  rep.config = {{"c", k.c}, {"C", k.C}};
  rep.pass = true;
  for (double t : ts)
    for (double th : thetas) rep.add(lemma17_margin(t, th, k).points.front());
  return rep;
}

LemmaCheckReport lemma15_check(const std::vector<double>& thetas, const std::vector<double>& ts,
                               const std::vector<cplx>& ws, double C) {
  LemmaCheckReport rep;
  rep.lemma_id = "lemma15";
  rep.relation = "sup_w measured <= bound";
  rep.config = {{"C", C}};
  rep.pass = true;
  for (double th : thetas) {
    require(th >= 0.0 && th <= 1.0, ErrorKind::DomainError, "lemma15 check needs theta <= 1");
    for (double t : ts) {
      double sup = 0.0;
      for (cplx w : ws) sup = std::max(sup, neg_moment_quadrature(th, t, w));
      LemmaCheckPoint p;
      p.params = {{"theta", th}, {"t", t}};
      p.measured = sup;
      p.bound = std::pow(t, th) * (1.0 + C * th);
      p.pass = p.measured <= p.bound;
      rep.add(std::move(p));
    }
  }
  return rep;
}

LemmaCheckReport lemma16_5_check(const std::vector<double>& ts) {
  LemmaCheckReport rep;
  rep.lemma_id = "lemma16.5";
  rep.relation = "measured > bound";
  rep.pass = true;
  for (double t : ts) {
    LemmaCheckPoint p;
    p.params = {{"t", t}};
    p.measured = log_abs_moment_exact(t);
    p.bound = std::exp(-t * t) / (2.0 * (t * t + 1.0));
    p.pass = p.measured > p.bound;
    rep.add(std::move(p));
  }
  return rep;
}

LemmaCheckReport lemma16_growth(const std::vector<double>& ts, int n_max, std::uint64_t draws, std::uint64_t seed,
                                unsigned threads) {
  LemmaCheckReport rep;
  rep.lemma_id = "lemma16_growth";
  rep.relation = "reported only: measured = E|log|1+zeta/t||^n/n!, bound = max over n";
  rep.config = {{"draws", static_cast<double>(draws)}, {"n_max", static_cast<double>(n_max)}};
  rep.pass = true;
  for (double t : ts) {
    require(t > 0.0, ErrorKind::DomainError, "lemma16 growth needs t > 0");
    using Row = std::vector<double>;
    auto parts = map_trial_chunks<Row>(draws, threads, [&](std::uint64_t b, std::uint64_t e) {
      Row acc(n_max + 1, 0.0);
      for (std::uint64_t i = b; i < e; ++i) {
        cplx z = rng::CounterRng(seed, i, rng::Domain::Moments).complex_gaussian(0);
        double x = std::abs(std::log(std::abs(1.0 + z / t)));
        double pw = 1.0;
        for (int n = 1; n <= n_max; ++n) {
          pw *= x;
          acc[n] += pw;
        }
      }
      return acc;
    });
    Row sums(n_max + 1, 0.0);
    for (const auto& p : parts)
      for (int n = 1; n <= n_max; ++n) sums[n] += p[n];
    std::vector<double> ratios;
    for (int n = 1; n <= n_max; ++n) ratios.push_back(sums[n] / static_cast<double>(draws) / std::tgamma(n + 1.0));
    double cmax = *std::max_element(ratios.begin(), ratios.end());
    for (int n = 1; n <= n_max; ++n) {
      LemmaCheckPoint p;
      p.params = {{"t", t}, {"n", static_cast<double>(n)}};
      p.measured = ratios[n - 1];
      p.bound = cmax;
      p.pass = true;
      rep.add(std::move(p));
    }
  }
  return rep;
}

double lemma18_log_bound(const std::vector<double>& lambdas, double theta) {
  require(theta >= 0.0 && theta < 2.0, ErrorKind::DomainError, "lemma18 needs 0 <= theta < 2");
  require(!lambdas.empty(), ErrorKind::DomainError, "lemma18 needs eigenvalues");
  double log_det = 0.0;
  for (double l : lambdas) log_det += std::log(l);
  double Lambda = *std::max_element(lambdas.begin(), lambdas.end());
  double N = static_cast<double>(lambdas.size());
  return -log_det + N * ((1.0 - 0.5 * theta) * std::log(Lambda) + std::lgamma(1.0 - 0.5 * theta));
}

double lemma18_diagonal_exact(const std::vector<double>& lambdas, double theta) {
  require(theta >= 0.0 && theta < 2.0, ErrorKind::DomainError, "lemma18 needs 0 <= theta < 2");
  double acc = 0.0;
  for (double l : lambdas) acc += -0.5 * theta * std::log(l) + std::lgamma(1.0 - 0.5 * theta);
  return std::exp(acc);
}

Lemma18Result lemma18_mc(const CoefficientModel& model, double r, std::uint64_t N, double theta,
                         std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  require(theta >= 0.0 && theta <= 1.0, ErrorKind::DomainError, "lemma18 Monte Carlo needs 0 <= theta <= 1");
  require(N >= 1 && N <= 8, ErrorKind::DomainError, "lemma18 Monte Carlo needs 1 <= N <= 8");
  CirculantSpectrum spec = circulant_eigenvalues(model, r, N);
  // Sigma = U diag(lambda) U^*, U_{jm} = e(jm/N)/sqrt(N), so eta = U diag(sqrt lambda) zeta.
  std::vector<cplx> U(N * N);
  for (std::uint64_t j = 0; j < N; ++j)
    for (std::uint64_t m = 0; m < N; ++m)
      U[j * N + m] = std::polar(std::sqrt(spec.lambdas[m] / static_cast<double>(N)),
                                2.0 * std::numbers::pi * static_cast<double>((j * m) % N) / static_cast<double>(N));
  auto parts = map_trial_chunks<stats::RunningMoments>(trials, threads, [&](std::uint64_t b, std::uint64_t e) {
    stats::RunningMoments acc;
    std::vector<cplx> z(N);
    for (std::uint64_t i = b; i < e; ++i) {
      rng::CounterRng g(seed, i, rng::Domain::Moments);
      for (std::uint64_t m = 0; m < N; ++m) z[m] = g.complex_gaussian(m);
      double log_prod = 0.0;
      for (std::uint64_t j = 0; j < N; ++j) {
        cplx eta = 0.0;
        for (std::uint64_t m = 0; m < N; ++m) eta += U[j * N + m] * z[m];
        log_prod += -0.5 * theta * std::log(std::norm(eta));
      }
      acc.push(std::exp(log_prod));
    }
    return acc;
  });
  stats::RunningMoments total;
  for (const auto& p : parts) total.merge(p);
  Lemma18Result res;
  res.estimate = total.mean;
  res.std_error = total.std_error();
  res.log_bound = lemma18_log_bound(spec.lambdas, theta);
  res.bound = std::exp(res.log_bound);
  double rel_se = res.estimate > 0.0 ? res.std_error / res.estimate : 0.0;
  res.pass = res.estimate <= res.bound * (1.0 + 5.0 * rel_se);
  return res;
}

LemmaCheckReport lemma18_check(const CoefficientModel& model, double r, std::uint64_t N, double theta,
                               std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  Lemma18Result res = lemma18_mc(model, r, N, theta, trials, seed, threads);
  LemmaCheckReport rep;
  rep.lemma_id = "lemma18";
  rep.relation = "measured <= bound * (1 + 5 relative standard error)";
  rep.config = {{"trials", static_cast<double>(trials)}, {"seed", static_cast<double>(seed)}};
  LemmaCheckPoint p;
  p.params = {{"r", r}, {"N", static_cast<double>(N)}, {"theta", theta}, {"std_error", res.std_error}};
  if (model.kind == ModelKind::Hyperbolic || model.kind == ModelKind::PowerLaw) p.params["L"] = model.L;
  p.measured = res.estimate;
  p.bound = res.bound;
  p.pass = res.pass;
  rep.add(std::move(p));
  return rep;
}

double lemma6_defect(const std::vector<cplx>& poly_coeffs, int k) {
  require(k >= 4, ErrorKind::DomainError, "lemma6 needs k >= 4");
  require(!poly_coeffs.empty() && poly_coeffs[0] != cplx(0.0), ErrorKind::ZeroConstantTerm,
          "polynomial must have a non-zero constant term");
  std::size_t deg = poly_coeffs.size() - 1;
  while (deg > 0 && poly_coeffs[deg] == cplx(0.0)) --deg;
  require(deg >= 1, ErrorKind::DomainError, "polynomial degree must be at least 1");
  // tau ranges over the M-th roots of unity, M = k^2 deg; tau w^j is then the
  // root of index i + j k deg, so one table of log|S| covers every average.
  const std::uint64_t kk = static_cast<std::uint64_t>(k);
  const std::uint64_t M = kk * kk * deg;
  std::span<const cplx> coeffs(poly_coeffs.data(), deg + 1);
  std::vector<double> logs(M);
  for (std::uint64_t p = 0; p < M; ++p) {
    cplx z = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(M));
    cplx v = cplx(0.0);
    for (std::size_t n = deg + 1; n-- > 0;) v = v * z + coeffs[n];
    logs[p] = std::log(std::abs(v));
  }
  const std::uint64_t stride = kk * deg;
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint64_t i = 0; i < M; ++i) {
    double avg = 0.0;
    for (std::uint64_t j = 1; j <= kk; ++j) avg += logs[(i + j * stride) % M];
    best = std::max(best, avg / static_cast<double>(k));
  }
  return std::log(std::abs(poly_coeffs[0])) - best;
}

LemmaCheckReport lemma6_check(const std::vector<std::vector<cplx>>& polys, const std::vector<int>& ks, double C) {
  LemmaCheckReport rep;
  rep.lemma_id = "lemma6";
  rep.relation = "measured <= bound";
  rep.config = {{"C", C}};
  rep.pass = true;
  for (int k : ks) {
    double worst = -std::numeric_limits<double>::infinity();
    std::size_t worst_idx = 0;
    for (std::size_t i = 0; i < polys.size(); ++i) {
      double d = lemma6_defect(polys[i], k);
      if (d > worst) {
        worst = d;
        worst_idx = i;
      }
    }
    LemmaCheckPoint p;
    p.params = {{"k", static_cast<double>(k)}, {"polys", static_cast<double>(polys.size())},
                {"worst_index", static_cast<double>(worst_idx)}};
    p.measured = worst;
    p.bound = C / (static_cast<double>(k) * k);
    p.pass = p.measured <= p.bound;
    rep.add(std::move(p));
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

CouplingDraw coupling_draw(double sigma, rng::CounterRng& g) {
  require(sigma > 0.0 && sigma <= 1.0, ErrorKind::DomainError, "coupling needs 0 < sigma <= 1");
  double u = g.next_uniform();
  if (sigma == 1.0 || u <= sigma * sigma) return {sigma * g.next_complex_gaussian(), true};
  // Residual density g(z) = (e^{-|z|^2} - e^{-|z|^2/sigma^2}) / (pi (1 - sigma^2)).
  const double excess = 1.0 / (sigma * sigma) - 1.0;
  for (;;) {
    cplx z = g.next_complex_gaussian();
    double v = g.next_uniform();
    if (v < -std::expm1(-std::norm(z) * excess)) return {z, false};
  }
}

}  // namespace

CouplingDraw gaussian_coupling_sample(double sigma, std::uint64_t seed, std::uint64_t stream) {
  rng::CounterRng g(seed, stream, rng::Domain::Coupling);
  return coupling_draw(sigma, g);
}

GafCouplingDraw gaf_coupling_sample(const std::vector<cplx>& b_seq, const std::vector<cplx>& c_seq, std::size_t N,
                                    std::uint64_t seed, std::uint64_t stream) {
  require(b_seq.size() > N && c_seq.size() > N, ErrorKind::RatioOutOfRange, "coefficient sequences shorter than N+1");
  std::vector<double> sig(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    double b = std::abs(b_seq[n]), c = std::abs(c_seq[n]);
    if (b == 0.0 && c == 0.0) {
      sig[n] = 1.0;
      continue;
    }
    require(b > 0.0 && c > 0.0 && c <= b, ErrorKind::RatioOutOfRange,
            "need 0 < |c_n| <= |b_n| at n = " + std::to_string(n));
    sig[n] = c / b;
  }
  rng::CounterRng g(seed, stream, rng::Domain::Coupling);
  GafCouplingDraw out;
  out.coeffs.resize(N + 1);
  out.in_event = true;
  for (std::size_t n = 0; n <= N; ++n) {
    CouplingDraw d = coupling_draw(sig[n], g);
    out.coeffs[n] = d.zeta * b_seq[n];
    out.in_event = out.in_event && d.in_event;
  }
  return out;
}

}  // namespace holegaf
