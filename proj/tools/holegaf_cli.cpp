#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "holegaf/config.hpp"
#include "holegaf/errors.hpp"
#include "holegaf/experiment.hpp"

using namespace holegaf;

namespace {

struct CommandArgs {
  std::string config_path;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* sub, CommandArgs& args) {
  sub->add_option("-c,--config", args.config_path, "flat key = value config file");
  sub->add_option("overrides", args.overrides, "key=value overrides (win over the file)");
}

int run_command(const std::string& command, const CommandArgs& args) {
  cli::RawConfig file;
  if (!args.config_path.empty()) file = cli::read_config_file(args.config_path);
  cli::RawConfig over = cli::parse_overrides(args.overrides);
  over["command"] = command;
  cli::ExperimentConfig cfg = cli::resolve_config(file, over);
  cli::RunResult res = cli::run_experiment(cfg, std::cerr);
  for (const auto& path : res.artifacts) std::cout << path << '\n';
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hole probabilities of Gaussian Taylor series on the unit disk"};
  app.require_subcommand(0, 1);
  bool print_defaults = false;
  app.add_flag("--defaults", print_defaults, "print every config key with its default and exit");

  const std::vector<std::string> commands = {"coeffs", "spectrum", "estimate", "oracle-verify", "envelope", "report"};
  std::vector<CommandArgs> args(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    auto* sub = app.add_subcommand(commands[i]);
    add_config_options(sub, args[i]);
    subs.push_back(sub);
  }
  subs[0]->description("list the weights a_n and per-radius summaries");
  subs[1]->description("circulant covariance spectrum at N points per radius");
  subs[2]->description("hole probability estimate per radius");
  subs[3]->description("run the lemma checks and emit one report per lemma");
  subs[4]->description("asymptotic envelope curves for -log P[Hole(r)]");
  subs[5]->description("join estimates in results_dir with envelope curves");

  std::string level = "quick";
  bool crippled = false;
  unsigned threads = 0;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "self-check suite; non-zero exit on failure");
  verify->add_option("level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  verify->add_flag("--crippled-rng", crippled, "force every Gaussian to zero (negative control)");
  verify->add_option("--threads", threads, "worker threads, 0 = all cores");
  verify->add_option("--seed", seed, "seed for the Monte Carlo checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_defaults) {
      std::cout << cli::defaults_text();
      return 0;
    }
    for (std::size_t i = 0; i < commands.size(); ++i)
      if (subs[i]->parsed()) return run_command(commands[i], args[i]);
    if (verify->parsed()) {
      SampleHooks hooks;
      hooks.zero_gaussians = crippled;
      auto outcome = cli::verify_suite(level == "full" ? cli::VerifyLevel::Full : cli::VerifyLevel::Quick, hooks,
                                       threads, seed);
      std::cout << cli::format_verify_table(outcome);
      return outcome.pass ? 0 : 1;
    }
    std::cout << app.help();
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::ConfigError ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
