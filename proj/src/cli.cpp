#include "hypb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <utility>

#include "hypb/oracles.hpp"
#include "hypb/rng.hpp"
#include "hypb/verify.hpp"

namespace hypb {

namespace {

namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

std::shared_ptr<const RadialProfile> solve_shared(const ModelParams& params) {
  return std::make_shared<RadialProfile>(solve_ground_state(params));
}

BubbleSum terms_to_sum(const std::shared_ptr<const RadialProfile>& W,
                       const std::vector<EnergyTermConfig>& terms) {
  std::vector<BubbleTerm> placed;
  placed.reserve(terms.size());
  for (const EnergyTermConfig& term : terms)
    placed.push_back(
        {BallPoint::on_axis(W->params().dim, term.rho), term.coeff});
  return BubbleSum(W, std::move(placed));
}

int cmd_ground_state(const RunConfig& cfg, std::ostream& log) {
  RadialProfile W = solve_ground_state(cfg.params);
  const fs::path dir = cfg.output_dir;
  io::save_profile(W, dir / "profile.csv", dir / "profile.json");
  std::vector<std::pair<double, double>> series;
  series.reserve(W.grid_size());
  for (std::size_t i = 0; i < W.grid_size(); ++i)
    series.emplace_back(W.grid_node(i), W.values()[i]);
  io::write_plot(dir / "profile_plot.dat", series);
  log << "ground state: w(0) = " << io::format_double(W.w0())
      << ", tail exponent " << io::format_double(W.tail_exponent())
      << ", residual sup " << io::format_double(W.diagnostics().residual_sup)
      << "\n";
  return 0;
}

// Plateau profile with a smooth taper over the outer half, scaled by the
// critical exponential weight; widening the plateau drives the Rayleigh
// quotient down to the bottom of the spectrum.
double widening_quotient(const ModelParams& params, double L,
                         const QuadratureSpec& quad) {
  const double rate = 0.5 * (params.dim - 1.0);
  QuadratureSpec spec = quad;
  spec.rho_max = std::max(spec.rho_max, L + 2.0);
  auto eta = [](double v) {
    if (v <= 0.5) return 1.0;
    if (v >= 1.0) return 0.0;
    const double phase = kPi * (v - 0.5);
    const double c = std::cos(phase);
    return c * c;
  };
  auto eta_prime = [](double v) {
    if (v <= 0.5 || v >= 1.0) return 0.0;
    return -kPi * std::sin(2.0 * kPi * (v - 0.5));
  };
  auto f = [&](double rho) { return std::exp(-rate * rho) * eta(rho / L); };
  auto fp = [&](double rho) {
    return std::exp(-rate * rho) *
           (-rate * eta(rho / L) + eta_prime(rho / L) / L);
  };
  return rayleigh_radial(f, fp, params.dim, spec);
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& log) {
  const double bottom = cfg.params.spectrum_bottom();
  io::CsvTable table;
  table.header = {"kind", "label", "quotient", "ratio_to_bottom"};
  std::vector<std::pair<double, double>> series;

  io::json widening = io::json::array();
  double final_ratio = 0.0;
  for (double L : cfg.spectrum.widths) {
    const double q = widening_quotient(cfg.params, L, cfg.quad);
    final_ratio = q / bottom;
    table.rows.push_back({"widening", io::format_double(L),
                          io::format_double(q),
                          io::format_double(final_ratio)});
    series.emplace_back(L, q);
    widening.push_back(io::json{{"width", L}, {"quotient", q}});
  }

  // random test functions: explicit radial envelopes and bubble clusters
  QuadratureSpec cheap = cfg.quad;
  cheap.rho_max = std::min(cheap.rho_max, 30.0);
  cheap.n_radial = std::min(cheap.n_radial, 192);
  cheap.n_angular = std::min(cheap.n_angular, 48);
  SplitMix64 rng(cfg.seed);
  auto W = solve_shared(cfg.params);
  const int dim = cfg.params.dim;
  const double beta_lo = 0.5 * (dim - 1.0) + 0.2;
  double min_quotient = std::numeric_limits<double>::infinity();
  const int n_random = cfg.spectrum.random_count;
  for (int i = 0; i < n_random; ++i) {
    double q = 0.0;
    if (i % 2 == 0) {
      const double alpha = rng.uniform(0.0, 2.0);
      const double beta = rng.uniform(beta_lo, beta_lo + 1.8);
      auto f = [=](double rho) {
        return (1.0 + alpha * rho * rho) * std::exp(-beta * rho);
      };
      auto fp = [=](double rho) {
        return (2.0 * alpha * rho - beta * (1.0 + alpha * rho * rho)) *
               std::exp(-beta * rho);
      };
      q = rayleigh_radial(f, fp, dim, cheap);
      table.rows.push_back({"radial", std::to_string(i),
                            io::format_double(q),
                            io::format_double(q / bottom)});
    } else {
      const int n_centers = rng.uniform() < 0.5 ? 1 : 2;
      std::vector<BubbleTerm> terms;
      for (int k = 0; k < n_centers; ++k) {
        const double rho = rng.uniform(0.0, 6.0);
        std::vector<double> direction(dim, 0.0);
        double norm2 = 0.0;
        do {
          norm2 = 0.0;
          for (double& x : direction) {
            x = rng.uniform(-1.0, 1.0);
            norm2 += x * x;
          }
        } while (norm2 > 1.0 || norm2 < 1e-6);
        const double scale = ball_radius(rho) / std::sqrt(norm2);
        for (double& x : direction) x *= scale;
        terms.push_back({BallPoint(direction), rng.uniform(0.2, 2.0)});
      }
      q = rayleigh_bubble_sum(BubbleSum(W, std::move(terms)), cheap);
      table.rows.push_back({"bubble", std::to_string(i),
                            io::format_double(q),
                            io::format_double(q / bottom)});
    }
    min_quotient = std::min(min_quotient, q);
  }

  const bool bound_holds = min_quotient >= bottom * (1.0 - 1e-6);
  const bool widening_reaches = final_ratio <= 1.05;
  const fs::path dir = cfg.output_dir;
  io::write_csv(dir / "spectrum.csv", table);
  io::write_plot(dir / "spectrum_plot.dat", series);
  io::write_json(dir / "spectrum.json",
                 io::json{{"schema_version", io::kSchemaVersion},
                          {"params", io::params_json(cfg.params)},
                          {"rng", kRngAlgorithm},
                          {"seed", cfg.seed},
                          {"bottom", bottom},
                          {"random_count", n_random},
                          {"min_quotient", min_quotient},
                          {"widening", widening},
                          {"widening_final_ratio", final_ratio},
                          {"bound_holds", bound_holds},
                          {"widening_reaches_bottom", widening_reaches}});
  log << "spectrum: min quotient " << io::format_double(min_quotient)
      << " against bottom " << io::format_double(bottom)
      << ", widening ratio " << io::format_double(final_ratio) << "\n";
  if (!bound_holds) {
    log << "numerical failure: a test function dips below the spectral "
           "bottom\n";
    return 3;
  }
  if (!widening_reaches) {
    log << "numerical failure: widening family stalls above 1.05 x bottom\n";
    return 3;
  }
  return 0;
}

int cmd_energy(const RunConfig& cfg, std::ostream& log) {
  auto W = solve_shared(cfg.params);
  BubbleSum u = terms_to_sum(W, cfg.energy_terms);
  EnergyReport report = evaluate_energy(u, cfg.coefficient, cfg.quad);
  EnergyLevels levels = energy_levels(*W, cfg.quad);
  io::json terms = io::json::array();
  for (const EnergyTermConfig& term : cfg.energy_terms)
    terms.push_back(io::json{{"rho", term.rho}, {"coeff", term.coeff}});
  io::write_json(cfg.output_dir / "energy.json",
                 io::json{{"schema_version", io::kSchemaVersion},
                          {"params", io::params_json(cfg.params)},
                          {"coefficient", io::coefficient_json(cfg.coefficient)},
                          {"terms", terms},
                          {"report", io::energy_report_json(report)},
                          {"levels", io::json{{"A", levels.A},
                                              {"S1", levels.S1},
                                              {"S2", levels.S2}}}});
  log << "energy: J = " << io::format_double(report.J) << ", J_inf = "
      << io::format_double(report.J_inf) << ", levels S1 = "
      << io::format_double(levels.S1) << ", S2 = "
      << io::format_double(levels.S2) << "\n";
  if (!std::isfinite(report.J) || !std::isfinite(report.I)) {
    log << "numerical failure: non-finite energy\n";
    return 3;
  }
  return 0;
}

int cmd_interaction(const RunConfig& cfg, std::ostream& log) {
  RadialProfile W = solve_ground_state(cfg.params);
  InteractionFit fit = interaction_lower_bound_check(
      W, cfg.interaction_separations, cfg.interaction_eps, cfg.quad);
  const fs::path dir = cfg.output_dir;
  io::write_csv(dir / "interaction.csv", io::interaction_csv(fit));
  io::write_json(dir / "interaction_fit.json",
                 io::interaction_fit_json(fit, cfg.params));
  std::vector<std::pair<double, double>> series;
  for (std::size_t i = 0; i < fit.separations.size(); ++i)
    series.emplace_back(fit.separations[i], std::log(fit.values[i]));
  io::write_plot(dir / "interaction_plot.dat", series);
  log << "interaction: fitted exponent " << io::format_double(fit.fitted_exponent)
      << " against decay rate " << io::format_double(cfg.params.decay_rate())
      << "\n";
  if (!fit.exponent_in_range) {
    log << "numerical failure: fitted exponent leaves the admissible range\n";
    return 3;
  }
  if (!fit.positive_lower_bound) {
    log << "numerical failure: scaled interaction loses positivity\n";
    return 3;
  }
  return 0;
}

int cmd_lemma_sweep(const RunConfig& cfg, std::ostream& log) {
  RadialProfile W = solve_ground_state(cfg.params);
  SweepReport report = key_lemma_sweep(cfg.sweep, W, cfg.quad, cfg.threads);
  const fs::path dir = cfg.output_dir;
  io::write_csv(dir / "sweep.csv", io::sweep_csv(report));
  io::write_json(dir / "sweep_summary.json",
                 io::sweep_summary_json(report, cfg.sweep, cfg.quad, W));
  std::map<double, double> envelope;
  std::size_t evaluated = 0;
  for (const SweepRow& row : report.rows) {
    if (row.skipped) continue;
    ++evaluated;
    auto [it, fresh] = envelope.emplace(row.t, row.margin);
    if (!fresh) it->second = std::min(it->second, row.margin);
  }
  io::write_plot(dir / "margin_plot.dat",
                 std::vector<std::pair<double, double>>(envelope.begin(),
                                                        envelope.end()));
  for (const std::string& warning : report.warnings)
    log << "warning: " << warning << "\n";
  log << "lemma sweep: " << evaluated << "/" << report.rows.size()
      << " rows evaluated, min margin " << io::format_double(report.min_margin)
      << "\n";
  if (evaluated == 0) {
    log << "numerical failure: every row was skipped\n";
    return 3;
  }
  if (!(report.min_margin > 0.0)) {
    log << "numerical failure: a sweep row reaches the two-bubble level\n";
    return 3;
  }
  return 0;
}

int cmd_minmax(const RunConfig& cfg, std::ostream& log) {
  RadialProfile W = solve_ground_state(cfg.params);
  MinmaxReport report = minmax_bracket(cfg.path, W, cfg.quad);
  const fs::path dir = cfg.output_dir;
  io::write_csv(dir / "minmax.csv", io::minmax_csv(report));
  io::write_json(dir / "minmax.json", io::minmax_json(report, cfg.path));
  std::vector<std::pair<double, double>> series;
  for (const PathSample& s : report.samples) series.emplace_back(s.t, s.J);
  io::write_plot(dir / "path_plot.dat", series);
  double min_margin = std::numeric_limits<double>::infinity();
  for (const PathSample& s : report.samples)
    min_margin = std::min(min_margin, s.margin);
  log << "minmax: path max " << io::format_double(report.path_max_J)
      << " inside (" << io::format_double(report.S1) << ", "
      << io::format_double(report.S2) << "), min path margin "
      << io::format_double(min_margin) << "\n";
  if (!report.bracket_ok) {
    log << "numerical failure: path maximum leaves the level bracket\n";
    return 3;
  }
  if (!(min_margin > 0.0)) {
    log << "numerical failure: a path sample reaches the two-bubble level\n";
    return 3;
  }
  return 0;
}

}  // namespace

void RunConfig::finalize() {
  try {
    params.validate();
    quad.validate();
    if (threads < 1) throw std::invalid_argument("threads must be positive");
    if (energy_terms.empty())
      throw std::invalid_argument("energy block needs at least one term");
    for (const EnergyTermConfig& term : energy_terms)
      if (!(term.coeff >= 0.0))
        throw std::invalid_argument("energy term coefficients must be >= 0");
    if (interaction_separations.empty())
      throw std::invalid_argument("interaction block needs separations");
    if (spectrum.random_count < 0)
      throw std::invalid_argument("spectrum random_count must be >= 0");
    for (double L : spectrum.widths)
      if (!(L > 0.0))
        throw std::invalid_argument("spectrum widths must be positive");

    sweep.params = params;
    sweep.a = coefficient;
    sweep.strict_regime = strict_regime;
    sweep.validate();
    path.params = params;
    path.a = coefficient;
    path.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.coefficient = CoefficientField::exp_defect(0.5, 3.5);
  for (int d = 6; d <= 14; ++d)
    cfg.interaction_separations.push_back(static_cast<double>(d));
  cfg.sweep.center_rhos = {12.0};
  cfg.sweep.separations = {8.0, 10.0, 12.0};
  cfg.path.R2 = 12.0;
  cfg.path.x2_rho = 7.0;
  cfg.path.boundary_samples = 4;
  cfg.finalize();
  return cfg;
}

std::vector<double> uniform_t_grid(double step) {
  if (!(step > 0.0 && step <= 1.0))
    throw ConfigError("t_step must lie in (0, 1]");
  const long long n = std::llround(1.0 / step);
  if (n < 1 || std::abs(static_cast<double>(n) * step - 1.0) > 1e-9)
    throw ConfigError("t_step must divide 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i)
    grid.push_back(static_cast<double>(i) / static_cast<double>(n));
  return grid;
}

RunConfig run_config_from_json(const io::json& doc) {
  RunConfig cfg = default_run_config();
  try {
    if (!doc.contains("schema_version"))
      throw ConfigError("config must carry schema_version");
    if (doc.at("schema_version").get<int>() != io::kSchemaVersion)
      throw ConfigError("unsupported schema_version");
    if (doc.contains("rng") &&
        doc.at("rng").get<std::string>() != kRngAlgorithm)
      throw ConfigError(std::string("rng must be '") + kRngAlgorithm + "'");

    for (const auto& item : doc.items()) {
      const std::string& key = item.key();
      if (key != "schema_version" && key != "rng" && key != "seed" &&
          key != "threads" && key != "strict_regime" && key != "output_dir" &&
          key != "params" && key != "quadrature" && key != "coefficient" &&
          key != "energy" && key != "interaction" && key != "lemma_sweep" &&
          key != "minmax" && key != "spectrum")
        throw ConfigError("unknown key '" + key + "' in config");
    }

    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("threads")) cfg.threads = doc.at("threads").get<int>();
    if (doc.contains("strict_regime"))
      cfg.strict_regime = doc.at("strict_regime").get<bool>();
    if (doc.contains("output_dir"))
      cfg.output_dir = doc.at("output_dir").get<std::string>();
    if (doc.contains("params"))
      cfg.params = io::params_from_json(doc.at("params"));
    if (doc.contains("quadrature"))
      cfg.quad = io::quadrature_from_json(doc.at("quadrature"), cfg.quad);
    if (doc.contains("coefficient"))
      cfg.coefficient = io::coefficient_from_json(doc.at("coefficient"));

    if (doc.contains("energy")) {
      const io::json& block = doc.at("energy");
      for (const auto& item : block.items())
        if (item.key() != "terms")
          throw ConfigError("unknown key '" + item.key() + "' in energy");
      cfg.energy_terms.clear();
      for (const io::json& term : block.at("terms"))
        cfg.energy_terms.push_back({term.at("rho").get<double>(),
                                    term.at("coeff").get<double>()});
    }
    if (doc.contains("interaction")) {
      const io::json& block = doc.at("interaction");
      for (const auto& item : block.items())
        if (item.key() != "separations" && item.key() != "eps")
          throw ConfigError("unknown key '" + item.key() + "' in interaction");
      if (block.contains("separations"))
        cfg.interaction_separations =
            block.at("separations").get<std::vector<double>>();
      if (block.contains("eps"))
        cfg.interaction_eps = block.at("eps").get<double>();
    }
    if (doc.contains("lemma_sweep")) {
      const io::json& block = doc.at("lemma_sweep");
      for (const auto& item : block.items())
        if (item.key() != "center_rhos" && item.key() != "separations" &&
            item.key() != "t_step" && item.key() != "R" &&
            item.key() != "alpha" && item.key() != "alpha_prime" &&
            item.key() != "K")
          throw ConfigError("unknown key '" + item.key() + "' in lemma_sweep");
      if (block.contains("center_rhos"))
        cfg.sweep.center_rhos =
            block.at("center_rhos").get<std::vector<double>>();
      if (block.contains("separations"))
        cfg.sweep.separations =
            block.at("separations").get<std::vector<double>>();
      if (block.contains("t_step"))
        cfg.sweep.t_grid = uniform_t_grid(block.at("t_step").get<double>());
      if (block.contains("R")) cfg.sweep.R = block.at("R").get<double>();
      if (block.contains("alpha"))
        cfg.sweep.alpha = block.at("alpha").get<double>();
      if (block.contains("alpha_prime"))
        cfg.sweep.alpha_prime = block.at("alpha_prime").get<double>();
      if (block.contains("K")) cfg.sweep.K = block.at("K").get<double>();
    }
    if (doc.contains("minmax")) {
      const io::json& block = doc.at("minmax");
      for (const auto& item : block.items())
        if (item.key() != "R2" && item.key() != "x2_rho" &&
            item.key() != "t_step" && item.key() != "boundary_samples" &&
            item.key() != "alpha" && item.key() != "alpha_prime")
          throw ConfigError("unknown key '" + item.key() + "' in minmax");
      if (block.contains("R2")) cfg.path.R2 = block.at("R2").get<double>();
      if (block.contains("x2_rho"))
        cfg.path.x2_rho = block.at("x2_rho").get<double>();
      if (block.contains("t_step"))
        cfg.path.t_grid = uniform_t_grid(block.at("t_step").get<double>());
      if (block.contains("boundary_samples"))
        cfg.path.boundary_samples = block.at("boundary_samples").get<int>();
      if (block.contains("alpha"))
        cfg.path.alpha = block.at("alpha").get<double>();
      if (block.contains("alpha_prime"))
        cfg.path.alpha_prime = block.at("alpha_prime").get<double>();
    }
    if (doc.contains("spectrum")) {
      const io::json& block = doc.at("spectrum");
      for (const auto& item : block.items())
        if (item.key() != "widths" && item.key() != "random_count")
          throw ConfigError("unknown key '" + item.key() + "' in spectrum");
      if (block.contains("widths"))
        cfg.spectrum.widths = block.at("widths").get<std::vector<double>>();
      if (block.contains("random_count"))
        cfg.spectrum.random_count = block.at("random_count").get<int>();
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  cfg.finalize();
  return cfg;
}

// Uniform step that regenerates the grid through the t_step schema field;
// the grids run_config_from_json builds are always of this form.
static double echo_t_step(const std::vector<double>& grid) {
  return grid.size() > 1 ? 1.0 / static_cast<double>(grid.size() - 1) : 1.0;
}

io::json run_config_json(const RunConfig& cfg) {
  io::json terms = io::json::array();
  for (const EnergyTermConfig& term : cfg.energy_terms)
    terms.push_back(io::json{{"rho", term.rho}, {"coeff", term.coeff}});
  return io::json{
      {"schema_version", io::kSchemaVersion},
      {"rng", kRngAlgorithm},
      {"seed", cfg.seed},
      {"threads", cfg.threads},
      {"strict_regime", cfg.strict_regime},
      {"output_dir", cfg.output_dir.string()},
      {"params", io::params_json(cfg.params)},
      {"quadrature", io::quadrature_json(cfg.quad)},
      {"coefficient", io::coefficient_json(cfg.coefficient)},
      {"energy", io::json{{"terms", terms}}},
      {"interaction", io::json{{"separations", cfg.interaction_separations},
                               {"eps", cfg.interaction_eps}}},
      {"lemma_sweep",
       io::json{{"center_rhos", cfg.sweep.center_rhos},
                {"separations", cfg.sweep.separations},
                {"t_step", echo_t_step(cfg.sweep.t_grid_or_default())},
                {"R", cfg.sweep.R},
                {"alpha", cfg.sweep.alpha},
                {"alpha_prime", cfg.sweep.alpha_prime},
                {"K", cfg.sweep.K_or_default()}}},
      {"minmax", io::json{{"R2", cfg.path.R2},
                          {"x2_rho", cfg.path.x2_or_default()},
                          {"t_step", echo_t_step(cfg.path.t_grid_or_default())},
                          {"boundary_samples", cfg.path.boundary_samples}}},
      {"spectrum", io::json{{"widths", cfg.spectrum.widths},
                            {"random_count", cfg.spectrum.random_count}}}};
}

int run_command(const std::string& subcommand, const RunConfig& cfg,
                std::ostream& log) {
  RunConfig local = cfg;
  try {
    local.finalize();
  } catch (const std::exception& e) {
    log << "config error: " << e.what() << "\n";
    return 2;
  }
  try {
    if (subcommand == "ground-state") return cmd_ground_state(local, log);
    if (subcommand == "spectrum") return cmd_spectrum(local, log);
    if (subcommand == "energy") return cmd_energy(local, log);
    if (subcommand == "interaction") return cmd_interaction(local, log);
    if (subcommand == "lemma-sweep") return cmd_lemma_sweep(local, log);
    if (subcommand == "minmax") return cmd_minmax(local, log);
    if (subcommand == "verify") {
      AcceptanceReport report = run_acceptance(local, log);
      return report.all_passed ? 0 : 3;
    }
  } catch (const std::exception& e) {
    log << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  log << "config error: unknown subcommand '" << subcommand << "'\n";
  return 2;
}

}  // namespace hypb
