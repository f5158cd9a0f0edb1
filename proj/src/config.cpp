#include "holegaf/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "holegaf/errors.hpp"

#ifndef HOLEGAF_VERSION_TAG
#define HOLEGAF_VERSION_TAG "holegaf-dev"
#endif

namespace holegaf::cli {

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& msg) {
  throw Error(ErrorKind::ConfigError, "key '" + key + "': " + msg);
}

std::string trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

bool is_known(const std::string& key) {
  for (const auto& k : config_keys())
    if (k.name == key) return true;
  return false;
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    config_error(key, "expected a finite number, got '" + v + "'");
  return x;
}

std::uint64_t parse_count(const std::string& key, const std::string& v) {
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec == std::errc() && ptr == v.data() + v.size()) return n;
  // Also accept exact integers written in floating notation, e.g. 1e5.
  double x = parse_double(key, v);
  if (x < 0.0 || x > 9007199254740992.0 || std::floor(x) != x)
    config_error(key, "expected a non-negative integer, got '" + v + "'");
  return static_cast<std::uint64_t>(x);
}

std::optional<double> parse_auto(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return parse_double(key, v);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  config_error(key, "expected true or false, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  return out;
}

void require(bool ok, const std::string& key, const std::string& msg) {
  if (!ok) config_error(key, msg);
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"command", "estimate", "coeffs | spectrum | estimate | oracle-verify | envelope | report"},
      {"model", "hyperbolic", "hyperbolic | power_law | constant_unit | explicit"},
      {"L", "1", "intensity of the hyperbolic and power-law models"},
      {"explicit_seq", "", "comma-separated weights a_0, a_1, ... for the explicit model"},
      {"r", "0.5", "comma-separated radii"},
      {"trials", "1000", "Monte Carlo trials per radius"},
      {"seed", "1", "master seed (default overridable by the HOLEGAF_SEED environment variable)"},
      {"confidence", "0.99", "two-sided confidence of reported intervals"},
      {"mode", "direct", "estimator: direct | threshold | tilted"},
      {"threads", "0", "worker threads, 0 = all cores", true},
      {"output_dir", "results", "directory for outputs", true},
      {"results_dir", "results", "directory read by the report command", true},
      {"N", "64", "number of points on the circle (spectrum)"},
      {"terms", "32", "number of weights listed by the coeffs command"},
      {"eps", "0.05", "threshold constant for L < 1"},
      {"B", "3", "threshold constant for L = 1"},
      {"alpha", "0.75", "threshold exponent for L > 1"},
      {"alpha1", "auto", "tilt scale for the tilted estimator"},
      {"M", "auto", "threshold override for the threshold estimator"},
      {"fail_exp", "30", "tail bound failure exponent"},
      {"tau_rel", "1e-6", "relative truncation tolerance"},
      {"K_init", "64", "initial circle grid size"},
      {"K_cap", "1048576", "largest circle grid size"},
      {"compute_cap", "1e11", "cap on trials * truncation degree"},
      {"lemma17_c", "0.4", "contraction constant in the small-theta moment bound"},
      {"lemma17_C", "10", "quadratic constant in the small-theta moment bound"},
      {"lemma15_C", "3", "constant in the shifted moment bound"},
      {"lemma6_C", "10", "constant in the roots-of-unity averaging bound"},
      {"band_c", "0.1", "lower constant of the bounded-weights band"},
      {"band_C", "10", "upper constant of the bounded-weights band"},
      {"kappa", "auto", "inner radius factor of the upper-bound certificate"},
      {"a", "auto", "exponent parameter of the upper-bound certificate"},
      {"chebyshev", "false", "also evaluate the upper-bound certificate in the envelope command"},
      {"oracle_trials", "100000", "Monte Carlo trials for the sampled oracle checks"},
  };
  return keys;
}

RawConfig parse_config_text(std::string_view text, const std::string& origin) {
  RawConfig out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string body = trim(line);
    if (body.empty()) continue;
    auto eq = body.find('=');
    std::ostringstream where;
    where << origin << ":" << lineno;
    if (eq == std::string::npos)
      throw Error(ErrorKind::ConfigError, where.str() + ": expected 'key = value', got '" + body + "'");
    std::string key = trim(body.substr(0, eq));
    std::string value = trim(body.substr(eq + 1));
    if (!is_known(key)) config_error(key, "unknown key (" + where.str() + ")");
    if (out.count(key)) config_error(key, "repeated (" + where.str() + ")");
    out[key] = value;
  }
  return out;
}

RawConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

RawConfig parse_overrides(const std::vector<std::string>& tokens) {
  RawConfig out;
  for (const auto& tok : tokens) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ConfigError, "override '" + tok + "' is not key=value");
    std::string key = trim(tok.substr(0, eq));
    if (!is_known(key)) config_error(key, "unknown key (override)");
    out[key] = trim(tok.substr(eq + 1));
  }
  return out;
}

ExperimentConfig resolve_config(const RawConfig& file_values, const RawConfig& overrides) {
  RawConfig v;
  for (const auto& k : config_keys()) v[k.name] = k.default_value;
  if (const char* env = std::getenv(kSeedEnvVar); env && *env) {
    parse_count(kSeedEnvVar, env);
    v["seed"] = env;
  }
  for (const auto& layer : {file_values, overrides})
    for (const auto& [key, value] : layer) {
      if (!is_known(key)) config_error(key, "unknown key");
      v[key] = value;
    }

  ExperimentConfig c;
  c.command = v["command"];
  static const std::set<std::string> commands = {"coeffs", "spectrum", "estimate", "oracle-verify", "envelope", "report"};
  require(commands.count(c.command) > 0, "command", "unknown command '" + c.command + "'");

  const double L = parse_double("L", v["L"]);
  ModelKind kind;
  try {
    kind = parse_model_kind(v["model"]);
  } catch (const Error& e) {
    config_error("model", e.what());
  }
  try {
    switch (kind) {
      case ModelKind::Hyperbolic: c.model = CoefficientModel::hyperbolic(L); break;
      case ModelKind::PowerLaw: c.model = CoefficientModel::power_law(L); break;
      case ModelKind::ConstantUnit: c.model = CoefficientModel::constant_unit(); break;
      case ModelKind::Explicit: {
        auto seq = parse_list("explicit_seq", v["explicit_seq"]);
        require(!seq.empty(), "explicit_seq", "explicit model needs at least one weight");
        c.model = CoefficientModel::explicit_sequence(std::move(seq));
        break;
      }
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigError) throw;
    config_error(kind == ModelKind::Explicit ? "explicit_seq" : "L", e.what());
  }

  c.radii = parse_list("r", v["r"]);
  require(!c.radii.empty(), "r", "at least one radius is needed");
  for (double r : c.radii) require(r > 0.0 && r < 1.0, "r", "radii must lie in (0,1)");

  c.trials = parse_count("trials", v["trials"]);
  require(c.trials >= 1, "trials", "must be at least 1");
  c.seed = parse_count("seed", v["seed"]);
  c.confidence = parse_double("confidence", v["confidence"]);
  require(c.confidence > 0.0 && c.confidence < 1.0, "confidence", "must lie in (0,1)");

  const std::string& mode = v["mode"];
  if (mode == "direct") c.mode = EstimateMode::Direct;
  else if (mode == "threshold" || mode == "threshold_lower") c.mode = EstimateMode::ThresholdLower;
  else if (mode == "tilted" || mode == "tilted_lower") c.mode = EstimateMode::TiltedLower;
  else config_error("mode", "expected direct, threshold or tilted, got '" + mode + "'");

  std::uint64_t threads = parse_count("threads", v["threads"]);
  require(threads <= 4096, "threads", "at most 4096");
  c.threads = static_cast<unsigned>(threads);
  c.output_dir = v["output_dir"];
  require(!c.output_dir.empty(), "output_dir", "must not be empty");
  c.results_dir = v["results_dir"];
  require(!c.results_dir.empty(), "results_dir", "must not be empty");

  c.N = parse_count("N", v["N"]);
  require(c.N >= 1 && c.N <= (std::uint64_t{1} << 24), "N", "must lie in [1, 2^24]");
  c.terms = parse_count("terms", v["terms"]);
  require(c.terms >= 1 && c.terms <= 10'000'000, "terms", "must lie in [1, 1e7]");

  c.threshold.eps = parse_double("eps", v["eps"]);
  require(c.threshold.eps > 0.0, "eps", "must be positive");
  c.threshold.B = parse_double("B", v["B"]);
  require(c.threshold.B > 0.0, "B", "must be positive");
  c.threshold.alpha = parse_double("alpha", v["alpha"]);
  require(c.threshold.alpha > 0.5 && c.threshold.alpha < 1.0, "alpha", "must lie in (1/2, 1)");
  c.alpha1 = parse_auto("alpha1", v["alpha1"]);
  if (c.alpha1) require(*c.alpha1 > 0.0, "alpha1", "must be positive");
  c.M = parse_auto("M", v["M"]);
  if (c.M) require(*c.M > 0.0, "M", "must be positive");

  c.fail_exp = parse_double("fail_exp", v["fail_exp"]);
  require(c.fail_exp > 0.0, "fail_exp", "must be positive");
  c.tau_rel = parse_double("tau_rel", v["tau_rel"]);
  require(c.tau_rel > 0.0 && c.tau_rel < 1.0, "tau_rel", "must lie in (0,1)");
  c.K_init = parse_count("K_init", v["K_init"]);
  require(c.K_init >= 8, "K_init", "must be at least 8");
  c.K_cap = parse_count("K_cap", v["K_cap"]);
  require(c.K_cap >= c.K_init, "K_cap", "must be at least K_init");
  c.compute_cap = parse_double("compute_cap", v["compute_cap"]);
  require(c.compute_cap > 0.0, "compute_cap", "must be positive");

  c.lemma17.c = parse_double("lemma17_c", v["lemma17_c"]);
  c.lemma17.C = parse_double("lemma17_C", v["lemma17_C"]);
  c.C15 = parse_double("lemma15_C", v["lemma15_C"]);
  c.C6 = parse_double("lemma6_C", v["lemma6_C"]);
  c.c81 = parse_double("band_c", v["band_c"]);
  c.C81 = parse_double("band_C", v["band_C"]);
  require(c.lemma17.c >= 0.0, "lemma17_c", "must be non-negative");
  require(c.lemma17.C >= 0.0, "lemma17_C", "must be non-negative");
  require(c.C15 >= 0.0, "lemma15_C", "must be non-negative");
  require(c.C6 >= 0.0, "lemma6_C", "must be non-negative");
  require(c.c81 > 0.0, "band_c", "must be positive");
  require(c.C81 >= c.c81, "band_C", "must be at least band_c");
  c.kappa = parse_auto("kappa", v["kappa"]);
  if (c.kappa) require(*c.kappa > 1.0 && *c.kappa <= 2.0, "kappa", "must lie in (1, 2]");
  c.a_cfg = parse_auto("a", v["a"]);
  if (c.a_cfg) require(*c.a_cfg > 0.0 && *c.a_cfg < std::sqrt(2.0), "a", "must lie in (0, sqrt 2)");
  c.chebyshev = parse_bool("chebyshev", v["chebyshev"]);
  c.oracle_trials = parse_count("oracle_trials", v["oracle_trials"]);
  require(c.oracle_trials >= 100, "oracle_trials", "must be at least 100");

  c.resolved = std::move(v);
  return c;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream os;
  for (const auto& k : config_keys()) {
    if (k.operational) continue;
    os << k.name << " = " << resolved.at(k.name) << "\n";
  }
  return os.str();
}

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

EstimatorOptions ExperimentConfig::estimator_options() const {
  EstimatorOptions o;
  o.tau_rel = tau_rel;
  o.fail_exp = fail_exp;
  o.K_init = K_init;
  o.K_cap = K_cap;
  o.threads = threads;
  o.compute_cap = compute_cap;
  return o;
}

std::string defaults_text() {
  std::ostringstream os;
  for (const auto& k : config_keys()) os << "# " << k.help << "\n" << k.name << " = " << k.default_value << "\n";
  return os.str();
}

std::string code_version() { return HOLEGAF_VERSION_TAG; }

}  // namespace holegaf::cli
