#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hypb/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hyperbolic two-bubble energy toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_dir;
  std::uint64_t seed = 1;
  int threads = 1;
  bool strict = false;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"ground-state", "solve the radial profile and serialize it"},
      {"spectrum", "Rayleigh-quotient demonstration of the spectral bottom"},
      {"energy", "evaluate the energy of a described bubble sum"},
      {"interaction", "two-bubble interaction sweep and decay fit"},
      {"lemma-sweep", "two-bubble level margins over a separation sweep"},
      {"minmax", "level bracket for the normalized bubble path"},
      {"verify", "run the full acceptance suite"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--output", output_dir, "output directory");
    sub->add_option("--seed", seed, "seed for randomized suites");
    sub->add_option("--threads", threads, "worker threads for sweeps");
    sub->add_flag("--strict-regime", strict,
                  "enforce the admissible separation window as errors");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  CLI::App* chosen = app.get_subcommands().front();

  hypb::RunConfig cfg;
  try {
    cfg = config_path.empty()
              ? hypb::default_run_config()
              : hypb::run_config_from_json(hypb::io::read_json(config_path));
  } catch (const std::exception& e) {
    std::cout << "config error: " << e.what() << "\n";
    return 2;
  }

  if (const char* env = std::getenv("HYPB_OUTPUT_DIR"); env && *env)
    cfg.output_dir = env;
  if (chosen->count("--output")) cfg.output_dir = output_dir;
  if (chosen->count("--seed")) cfg.seed = seed;
  if (chosen->count("--threads")) cfg.threads = threads;
  if (chosen->count("--strict-regime")) cfg.strict_regime = strict;

  return hypb::run_command(chosen->get_name(), cfg, std::cout);
}
