#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "holegaf/coeffs.hpp"
#include "holegaf/holes.hpp"
#include "holegaf/oracles.hpp"

namespace holegaf::cli {

inline constexpr const char* kSeedEnvVar = "HOLEGAF_SEED";

struct ConfigKey {
  std::string name;
  std::string default_value;
  std::string help;
  // Keys that only affect where or how fast results are produced; they are
  // left out of the config hash and of the embedded config.
  bool operational = false;
};

const std::vector<ConfigKey>& config_keys();

using RawConfig = std::map<std::string, std::string>;

struct ExperimentConfig {
  std::string command;
  CoefficientModel model;
  std::vector<double> radii;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double confidence = 0.99;
  EstimateMode mode = EstimateMode::Direct;
  unsigned threads = 0;
  std::string output_dir;
  std::string results_dir;
  std::uint64_t N = 0;
  std::uint64_t terms = 0;
  ThresholdConstants threshold;
  std::optional<double> M;
  std::optional<double> alpha1;
  double fail_exp = kDefaultFailExp;
  double tau_rel = kDefaultTauRel;
  std::uint64_t K_init = kDefaultKInit;
  std::uint64_t K_cap = kDefaultKCap;
  double compute_cap = 1e11;
  Lemma17Constants lemma17;
  double C15 = 3.0;
  double C6 = 10.0;
  double c81 = 0.1;
  double C81 = 10.0;
  std::optional<double> kappa;
  std::optional<double> a_cfg;
  bool chebyshev = false;
  std::uint64_t oracle_trials = 0;

  RawConfig resolved;  // every key, as text, after layering

  // "key = value" lines of the non-operational keys in key order.
  std::string canonical() const;
  // 16 hex digits of FNV-1a over canonical().
  std::string hash() const;
  EstimatorOptions estimator_options() const;
};

// Parses flat "key = value" text; '#' starts a comment. Throws ConfigError with
// the origin and line on malformed lines, unknown or repeated keys.
RawConfig parse_config_text(std::string_view text, const std::string& origin = "config");
RawConfig read_config_file(const std::string& path);

// Parses "key=value" override tokens.
RawConfig parse_overrides(const std::vector<std::string>& tokens);

// Layering: built-in defaults, then the seed environment variable (seed only),
// then the file, then overrides. Every value is validated; errors name the key.
ExperimentConfig resolve_config(const RawConfig& file_values, const RawConfig& overrides);

// All defaults as a config file that resolve_config accepts.
std::string defaults_text();

std::string code_version();
std::uint64_t fnv1a64(std::string_view data) noexcept;

}  // namespace holegaf::cli
