#include "holegaf/envelopes.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "holegaf/errors.hpp"
#include "holegaf/spectra.hpp"

namespace holegaf {

namespace {

void check_intensity(double L) {
  if (!(L > 0.0 && std::isfinite(L))) {
    std::ostringstream os;
    os << "intensity must be positive, got " << L;
    throw Error(ErrorKind::InvalidIntensity, os.str());
  }
}

void check_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) {
    std::ostringstream os;
    os << "radius must lie in (0,1), got " << r;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
}

}  // namespace

const char* to_string(Regime r) noexcept {
  switch (r) {
    case Regime::Sub1: return "sub1";
    case Regime::Crit: return "crit";
    case Regime::Super1: return "super1";
  }
  return "?";
}

Regime regime_for(double L) {
  check_intensity(L);
  if (L < 1.0) return Regime::Sub1;
  if (L > 1.0) return Regime::Super1;
  return Regime::Crit;
}

BoundEnvelope theorem1_envelope(double L, double r) {
  check_intensity(L);
  check_radius(r);
  BoundEnvelope e;
  e.L = L;
  e.r = r;
  e.regime = regime_for(L);
  const double delta = 1.0 - r;
  const double lg = std::log(1.0 / delta);
  e.pre_asymptotic = lg < 1.0;
  switch (e.regime) {
    case Regime::Sub1:
      e.lower = (1.0 - L) / std::pow(2.0, L + 1.0) * std::pow(delta, -L) * lg;
      e.upper = 2.0 * e.lower;
      break;
    case Regime::Crit:
      e.lower = e.upper = std::numbers::pi * std::numbers::pi / 12.0 / delta;
      break;
    case Regime::Super1:
      e.lower = e.upper = (L - 1.0) * (L - 1.0) / 4.0 / delta * lg * lg;
      break;
  }
  return e;
}

BoundEnvelope general_band_L_less_1(const CoefficientModel& model, double r, std::optional<double> L) {
  check_radius(r);
  model.validate();
  if (!model.is_non_increasing()) throw Error(ErrorKind::NotMonotone, "weights must be non-increasing");
  double intensity = 0.0;
  if (L) {
    intensity = *L;
  } else if (model.kind == ModelKind::Hyperbolic || model.kind == ModelKind::PowerLaw) {
    intensity = model.L;
  } else if (model.kind == ModelKind::ConstantUnit) {
    intensity = 1.0;
  } else {
    throw Error(ErrorKind::InvalidIntensity, "explicit weights need an intensity for the band");
  }
  check_intensity(intensity);
  if (intensity > 1.0) throw Error(ErrorKind::IntensityOutOfRange, "band needs L <= 1");
  if (model.kind != ModelKind::Explicit || !model.explicit_seq.empty()) {
    if (std::abs(coefficient(model, 0) - 1.0) > 1e-12)
      throw Error(ErrorKind::InvalidModel, "band needs a_0 = 1");
  }
  BoundEnvelope e;
  e.L = intensity;
  e.r = r;
  e.regime = Regime::Sub1;
  const double lg = std::log(1.0 / (1.0 - r));
  e.pre_asymptotic = lg < 1.0;
  const double s2 = sigma_sq(model, r);
  e.lower = 0.5 * (1.0 - intensity) * s2 * lg;
  e.upper = (1.0 - intensity) * s2 * lg;
  return e;
}

BoundEnvelope theorem81_band(double r, double c, double C) {
  if (!(r >= 0.5 && r < 1.0)) {
    std::ostringstream os;
    os << "band needs 1/2 <= r < 1, got " << r;
    throw Error(ErrorKind::InvalidRadius, os.str());
  }
  if (!(c > 0.0 && c <= C)) throw Error(ErrorKind::DomainError, "band needs 0 < c <= C");
  BoundEnvelope e;
  e.L = 1.0;
  e.r = r;
  e.regime = Regime::Crit;
  e.lower = c / (1.0 - r);
  e.upper = C / (1.0 - r);
  e.pre_asymptotic = std::log(1.0 / (1.0 - r)) < 1.0;
  return e;
}

ChebyshevTerms chebyshev_terms(double L, double r, std::optional<double> a_cfg, std::optional<double> kappa) {
  check_intensity(L);
  if (!(L > 1.0)) throw Error(ErrorKind::IntensityOutOfRange, "certificate needs L > 1");
  check_radius(r);
  ChebyshevTerms t;
  t.delta = 1.0 - r;
  t.log_inv_delta = std::log(1.0 / t.delta);
  t.a = a_cfg ? *a_cfg : 1.0 / std::sqrt(t.log_inv_delta);
  t.theta = 2.0 - t.a * t.a;
  if (!(t.theta > 0.0 && t.theta < 2.0)) throw Error(ErrorKind::DomainError, "need 0 < a^2 < 2");
  t.kappa = kappa ? *kappa : 1.0 + t.delta;
  t.r0 = 1.0 - t.kappa * t.delta;
  if (!(t.r0 > 0.0)) throw Error(ErrorKind::InvalidRadius, "r_0 = 1 - kappa delta must be positive");
  t.N = static_cast<std::uint64_t>(std::floor((L - 1.0) / (2.0 * t.delta) * t.log_inv_delta));
  if (t.N == 0) throw Error(ErrorKind::DomainError, "radius too small for a non-empty point set");
  CirculantSpectrum spec = circulant_eigenvalues(CoefficientModel::hyperbolic(L), t.r0, t.N);
  const double Nd = static_cast<double>(t.N);
  t.log_det = spec.log_det;
  t.log_Lambda = std::log(spec.Lambda_max);
  t.threshold_term = Nd * t.theta * (0.5 + t.a) * t.log_inv_delta;
  t.gamma_term = Nd * std::lgamma(1.0 - 0.5 * t.theta);
  t.exponent = t.threshold_term - t.log_det + Nd * (1.0 - 0.5 * t.theta) * t.log_Lambda + t.gamma_term;
  t.normalized = t.exponent * t.delta / (t.log_inv_delta * t.log_inv_delta);
  return t;
}

double chebyshev_certificate(double L, double r, std::optional<double> a_cfg, std::optional<double> kappa) {
  return chebyshev_terms(L, r, a_cfg, kappa).normalized;
}

std::string envelope_csv(const std::vector<BoundEnvelope>& rows) {
  auto num = [](double x) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, end);
  };
  std::ostringstream os;
  os << "L,r,regime,lower,upper\n";
  for (const auto& e : rows)
    os << num(e.L) << ',' << num(e.r) << ',' << to_string(e.regime) << ',' << num(e.lower) << ',' << num(e.upper) << '\n';
  return os.str();
}

}  // namespace holegaf
