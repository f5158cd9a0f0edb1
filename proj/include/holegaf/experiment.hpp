#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "holegaf/config.hpp"
#include "holegaf/gaf.hpp"
#include "holegaf/oracles.hpp"

namespace holegaf::cli {

struct RunResult {
  int exit_code = 0;
  std::vector<std::string> artifacts;  // paths written, data files first
};

// Dispatches on config.command. Data files are a pure function of the config
// (minus operational keys); the timestamp and wall times go to <name>.meta.json.
RunResult run_experiment(const ExperimentConfig& config, std::ostream& log);

// The lemma checks run by the oracle-verify command.
std::vector<LemmaCheckReport> oracle_reports(const ExperimentConfig& config);

struct VerifyRow {
  std::string name;
  std::string kind;  // identity | quadrature | monte-carlo
  double measured = 0.0;
  double expected = 0.0;
  std::string criterion;
  bool pass = false;
};

struct VerifyOutcome {
  std::vector<VerifyRow> rows;
  bool pass = true;
};

enum class VerifyLevel { Quick, Full };

// Quick: closed forms and quadrature. Full adds Monte Carlo checks of the
// sampler, moments, couplings and the L = 1 hole probability.
VerifyOutcome verify_suite(VerifyLevel level, const SampleHooks& hooks = {}, unsigned threads = 0,
                           std::uint64_t seed = 1);
std::string format_verify_table(const VerifyOutcome& outcome);

// CSV joining estimate records with envelope curves per (L, r).
std::string report_csv(const std::vector<std::string>& estimate_lines);

}  // namespace holegaf::cli
