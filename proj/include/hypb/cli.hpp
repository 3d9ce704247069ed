#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "hypb/energy.hpp"
#include "hypb/estimates.hpp"
#include "hypb/io.hpp"
#include "hypb/minmax.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace hypb {

// Rejected configuration input; run_command maps it to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bubble term placed on the first coordinate axis at signed distance rho.
struct EnergyTermConfig {
  double rho = 0.0;
  double coeff = 1.0;
};

struct SpectrumConfig {
  std::vector<double> widths{6.0, 10.0, 14.0, 20.0, 28.0, 38.0};
  int random_count = 200;
};

struct RunConfig {
  ModelParams params;
  QuadratureSpec quad;
  CoefficientField coefficient = CoefficientField::unit();
  std::uint64_t seed = 1;
  int threads = 1;
  bool strict_regime = false;
  std::filesystem::path output_dir = "out";

  std::vector<EnergyTermConfig> energy_terms{{5.0, 1.0}, {-5.0, 1.0}};
  std::vector<double> interaction_separations;
  double interaction_eps = 0.1;
  SpectrumConfig spectrum;
  LemmaSweepConfig sweep;
  PathConfig path;

  // Re-derives the blocks that mirror shared fields (params, coefficient,
  // strict flag) and validates everything; throws ConfigError.
  void finalize();
};

// The configuration the acceptance suite runs: exponential defect
// coefficient, center distance 12 with separations {8, 10, 12}, and the
// boundary-radius-12 path with the interior anchor at distance 7.
RunConfig default_run_config();

// Uniform t grid with step dividing 1 exactly (within 1e-9).
std::vector<double> uniform_t_grid(double step);

RunConfig run_config_from_json(const io::json& doc);
io::json run_config_json(const RunConfig& cfg);

// Executes one subcommand, writing artifacts under cfg.output_dir. Returns
// 0 when every asserted margin/tolerance holds, 2 for configuration errors,
// 3 for numerical failures; diagnostics go to log.
int run_command(const std::string& subcommand, const RunConfig& cfg,
                std::ostream& log);

}  // namespace hypb
