#include "hypb/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <utility>

#include "hypb/oracles.hpp"
#include "hypb/rng.hpp"

namespace hypb {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) { return io::format_double(v); }

BallPoint random_point(SplitMix64& rng, int dim, double rho_max) {
  std::vector<double> x(dim, 0.0);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& xi : x) {
      xi = rng.uniform(-1.0, 1.0);
      norm2 += xi * xi;
    }
  } while (norm2 > 1.0 || norm2 < 1e-6);
  const double scale = ball_radius(rng.uniform(0.0, rho_max)) / std::sqrt(norm2);
  for (double& xi : x) xi *= scale;
  return BallPoint(std::move(x));
}

BallPoint negate(const BallPoint& b) {
  std::vector<double> x = b.coords();
  for (double& xi : x) xi = -xi;
  return BallPoint(std::move(x));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Ctx {
  RunConfig pinned;
  std::shared_ptr<const RadialProfile> W;
  EnergyLevels levels;
};

CriterionResult crit_geometry(const Ctx& ctx) {
  CriterionResult r{1, "hyperbolic geometry identities", false, "", 0.0};
  SplitMix64 rng(ctx.pinned.seed * 0x9e3779b97f4a7c15ULL + 1);
  double worst_iso = 0.0, worst_inv = 0.0, worst_tri = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int dim = 2 + i % 3;
    const BallPoint x = random_point(rng, dim, 4.0);
    const BallPoint y = random_point(rng, dim, 4.0);
    const BallPoint b = random_point(rng, dim, 3.0);
    const double d = hyp_distance(x, y);
    worst_iso = std::max(
        worst_iso,
        std::abs(hyp_distance(translate(b, x), translate(b, y)) - d));
    worst_inv = std::max(
        worst_inv, hyp_distance(translate(negate(b), translate(b, x)), x));
    worst_tri = std::max(
        worst_tri, d - hyp_distance(x, b) - hyp_distance(b, y));
  }
  r.passed = worst_iso <= 1e-12 && worst_inv <= 1e-12 && worst_tri <= 1e-12;
  r.details = "isometry " + fmt(worst_iso) + ", inverse " + fmt(worst_inv) +
              ", triangle excess " + fmt(worst_tri);
  return r;
}

CriterionResult crit_volumes(const Ctx& ctx) {
  CriterionResult r{2, "ball volume quadrature", false, "", 0.0};
  double worst = 0.0;
  for (int dim : {2, 3, 4})
    for (double radius : {1.0, 5.0, 10.0}) {
      QuadratureSpec spec = ctx.pinned.quad;
      spec.rho_max = radius;
      const double numeric =
          radial_integrate([](double) { return 1.0; }, dim, spec).value;
      worst =
          std::max(worst, std::abs(numeric / ball_volume(dim, radius) - 1.0));
    }
  r.passed = worst <= 1e-8;
  r.details = "max relative volume error " + fmt(worst);
  return r;
}

CriterionResult crit_spectrum(const Ctx& ctx, std::ostream& log) {
  CriterionResult r{3, "spectral bottom Rayleigh bound", false, "", 0.0};
  RunConfig sub = ctx.pinned;
  sub.output_dir = ctx.pinned.output_dir / "spectrum";
  std::ostringstream sink;
  const int code = run_command("spectrum", sub, sink);
  if (code != 0) {
    r.details = "spectrum run exited " + std::to_string(code);
    log << sink.str();
    return r;
  }
  const io::json doc = io::read_json(sub.output_dir / "spectrum.json");
  const double min_q = doc.at("min_quotient").get<double>();
  const double bottom = doc.at("bottom").get<double>();
  const double ratio = doc.at("widening_final_ratio").get<double>();
  r.passed = min_q >= bottom * (1.0 - 1e-6) && ratio <= 1.05;
  r.details = "min quotient " + fmt(min_q) + " vs bottom " + fmt(bottom) +
              ", widening ratio " + fmt(ratio);
  return r;
}

CriterionResult crit_ground_state(const Ctx& ctx) {
  CriterionResult r{4, "ground-state solver cross-check", false, "", 0.0};
  const VariationalResult vr = variational_ground_state(ctx.pinned.params);
  const double rel = std::abs(vr.w0 / ctx.W->w0() - 1.0);
  const double residual = ctx.W->diagnostics().residual_sup;
  const double c = ctx.pinned.params.decay_rate();
  const double tail_rel = std::abs(ctx.W->tail_exponent() / c - 1.0);
  r.passed = rel <= 1e-4 && residual <= 1e-6 && tail_rel <= 0.02;
  r.details = "w(0) off by " + fmt(rel) + ", residual " + fmt(residual) +
              ", tail exponent off by " + fmt(tail_rel);
  return r;
}

CriterionResult crit_norm_identity(const Ctx& ctx) {
  CriterionResult r{5, "norm-mass identity of the bubble", false, "", 0.0};
  const NormA check = norm_A(*ctx.W, ctx.pinned.quad);
  r.passed = check.discrepancy <= 1e-6;
  r.details = "relative discrepancy " + fmt(check.discrepancy) + " at A = " +
              fmt(check.A);
  return r;
}

CriterionResult crit_reciprocity(const Ctx& ctx) {
  CriterionResult r{6, "interaction reciprocity", false, "", 0.0};
  const int dim = ctx.pinned.params.dim;
  double worst = 0.0;
  for (double d : {6.0, 8.0, 10.0}) {
    const BallPoint b1 = BallPoint::on_axis(dim, 0.5 * d + 1.0);
    const BallPoint b2 = BallPoint::on_axis(dim, -(0.5 * d - 1.0));
    const double forward = interaction(*ctx.W, b1, b2, ctx.pinned.quad);
    const double backward = interaction(*ctx.W, b2, b1, ctx.pinned.quad);
    worst = std::max(worst, std::abs(forward / backward - 1.0));
  }
  r.passed = worst <= 1e-3;
  r.details = "max relative asymmetry " + fmt(worst);
  return r;
}

CriterionResult crit_decay_fit(const Ctx& ctx) {
  CriterionResult r{7, "interaction decay exponent", false, "", 0.0};
  std::vector<double> seps;
  for (int d = 6; d <= 14; ++d) seps.push_back(static_cast<double>(d));
  std::string parts;
  bool ok = true;
  ModelParams second{3, 2.5, 0.5};
  for (const ModelParams& params : {ctx.pinned.params, second}) {
    const RadialProfile& W =
        params.p == ctx.pinned.params.p && params.lambda == ctx.pinned.params.lambda
            ? *ctx.W
            : solve_ground_state(params);
    const InteractionFit fit =
        interaction_lower_bound_check(W, seps, 0.1, ctx.pinned.quad);
    const double rel = std::abs(fit.fitted_exponent / -params.decay_rate() - 1.0);
    ok = ok && rel <= 0.05;
    if (!parts.empty()) parts += "; ";
    parts += "p=" + fmt(params.p) + " slope " + fmt(fit.fitted_exponent) +
             " off by " + fmt(rel);
  }
  r.passed = ok;
  r.details = parts;
  return r;
}

CriterionResult crit_convexity(const Ctx& ctx) {
  CriterionResult r{8, "convexity residual positivity", false, "", 0.0};
  SplitMix64 rng(ctx.pinned.seed * 0x9e3779b97f4a7c15ULL + 8);
  const double powers[] = {1.5, 2.0, 2.5, 3.0, 4.0};
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double a = rng.uniform(0.0, 10.0);
    const double b = rng.uniform(0.0, 10.0);
    const double p = powers[i % 5];
    const double scale = std::pow(a + b, p + 1.0);
    if (scale <= 0.0) continue;
    worst = std::min(worst, convex_inequality_check(a, b, p) / scale);
  }
  r.passed = worst >= -1e-12;
  r.details = "most negative scaled residual " + fmt(worst);
  return r;
}

CriterionResult crit_sweep(const Ctx& ctx, std::ostream& log) {
  CriterionResult r{9, "two-bubble level margin sweep", false, "", 0.0};
  RunConfig sub = ctx.pinned;
  sub.output_dir = ctx.pinned.output_dir / "lemma_sweep";
  std::ostringstream sink;
  const int code = run_command("lemma-sweep", sub, sink);
  if (code != 0) {
    r.details = "sweep run exited " + std::to_string(code);
    log << sink.str();
    return r;
  }
  const io::json doc = io::read_json(sub.output_dir / "sweep_summary.json");
  const double min_margin = doc.at("min_margin").get<double>();
  const std::size_t rows = doc.at("rows").get<std::size_t>();
  const std::size_t skipped = doc.at("rows_skipped").get<std::size_t>();
  r.passed = min_margin > 0.0 && skipped == 0 && rows > 0;
  r.details = "min margin " + fmt(min_margin) + " over " +
              std::to_string(rows) + " rows";
  return r;
}

CriterionResult crit_t_ratio(const Ctx&) {
  CriterionResult r{10, "mixing ratio bound", false, "", 0.0};
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
  bool ok = true;
  double worst_gap = 1.0;
  std::string parts;
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double bound = t_ratio_bound(p);
    const std::vector<double> vals = t_ratio_profile(p, grid);
    int hits = 0;
    bool near_half = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (bound - vals[i] <= 1e-9 * bound) {
        ++hits;
        if (std::abs(grid[i] - 0.5) > 1e-6) near_half = false;
      }
    }
    worst_gap = std::min(worst_gap, (bound - vals[490]) / bound);
    ok = ok && hits >= 1 && near_half;
    if (!parts.empty()) parts += ", ";
    parts += "p=" + fmt(p) + ":" + std::to_string(hits);
  }
  r.passed = ok;
  r.details = "equality hits at t=1/2 only (" + parts +
              "); off-center gap >= " + fmt(worst_gap);
  return r;
}

CriterionResult crit_defect_smallness(const Ctx& ctx) {
  CriterionResult r{11, "defect-to-interaction decay", false, "", 0.0};
  LemmaSweepConfig cfg;
  cfg.params = ctx.pinned.params;
  cfg.a = ctx.pinned.coefficient;
  cfg.R = 6.8;
  cfg.center_rhos = {10.0, 12.0, 14.0};
  cfg.separations = {8.25};
  cfg.strict_regime = true;
  const SweepReport report =
      key_lemma_sweep(cfg, *ctx.W, ctx.pinned.quad, ctx.pinned.threads);
  std::map<double, double> ratio_by_rho;
  std::size_t skipped = 0;
  for (const SweepRow& row : report.rows) {
    if (row.skipped) {
      ++skipped;
      continue;
    }
    auto [it, fresh] = ratio_by_rho.emplace(row.center_rhos.second,
                                            row.defect_over_interaction);
    if (!fresh) it->second = std::max(it->second, row.defect_over_interaction);
  }
  bool decreasing = ratio_by_rho.size() == cfg.center_rhos.size();
  std::string parts;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& [rho, ratio] : ratio_by_rho) {
    decreasing = decreasing && ratio < prev;
    prev = ratio;
    if (!parts.empty()) parts += ", ";
    parts += "rho=" + fmt(rho) + ": " + fmt(ratio);
  }
  r.passed = decreasing && skipped == 0 && report.min_margin > 0.0;
  r.details = parts + (skipped ? "; " + std::to_string(skipped) + " skipped"
                               : "");
  return r;
}

CriterionResult crit_minmax(const Ctx& ctx, std::ostream& log) {
  CriterionResult r{12, "min-max level bracket", false, "", 0.0};
  RunConfig sub = ctx.pinned;
  sub.output_dir = ctx.pinned.output_dir / "minmax";
  std::ostringstream sink;
  const int code = run_command("minmax", sub, sink);
  if (code != 0) {
    r.details = "minmax run exited " + std::to_string(code);
    log << sink.str();
    return r;
  }
  const io::json doc = io::read_json(sub.output_dir / "minmax.json");
  const bool bracket = doc.at("bracket_ok").get<bool>();
  const double path_max = doc.at("path_max_J").get<double>();
  const double S2 = doc.at("S2").get<double>();

  // center-of-mass limit of a far single bubble against the closed form
  const int dim = ctx.pinned.params.dim;
  const double d = 20.0;
  BubbleSum far(ctx.W, {{BallPoint::on_axis(dim, d), 1.0}});
  const double m1 = center_of_mass(far, ctx.pinned.quad)[0];
  const double k = mass_transport_coefficient();
  const double limit = std::tanh(0.5) * ball_radius(d) / (k * d);
  const double m_err = std::abs(m1 - limit);

  r.passed = bracket && path_max < S2 && m_err <= 1e-2;
  r.details = "path max " + fmt(path_max) + " vs S2 " + fmt(S2) +
              ", m limit off by " + fmt(m_err);
  return r;
}

CriterionResult crit_determinism(const Ctx& ctx, std::ostream& log) {
  CriterionResult r{13, "deterministic artifact reproduction", false, "", 0.0};
  const char* subcommands[] = {"ground-state", "spectrum",    "energy",
                               "interaction",  "lemma-sweep", "minmax"};
  std::ostringstream sink;
  for (const char* dir : {"run1", "run2"}) {
    RunConfig sub = ctx.pinned;
    sub.output_dir = ctx.pinned.output_dir / "determinism" / dir;
    sub.spectrum.random_count = 20;
    sub.interaction_separations = {6.0, 8.0, 10.0};
    sub.sweep.center_rhos = {10.0};
    sub.sweep.separations = {8.0};
    sub.sweep.t_grid = uniform_t_grid(0.1);
    sub.path.t_grid = uniform_t_grid(0.1);
    sub.path.boundary_samples = 2;
    for (const char* subcommand : subcommands) {
      const int code = run_command(subcommand, sub, sink);
      if (code != 0) {
        r.details = std::string(subcommand) + " exited " +
                    std::to_string(code) + " in " + dir;
        log << sink.str();
        return r;
      }
    }
  }
  const fs::path run1 = ctx.pinned.output_dir / "determinism" / "run1";
  const fs::path run2 = ctx.pinned.output_dir / "determinism" / "run2";
  std::vector<fs::path> files;
  for (const auto& entry : fs::recursive_directory_iterator(run1))
    if (entry.is_regular_file())
      files.push_back(fs::relative(entry.path(), run1));
  std::sort(files.begin(), files.end());
  std::size_t mismatches = 0;
  for (const fs::path& rel : files)
    if (slurp(run1 / rel) != slurp(run2 / rel)) ++mismatches;
  std::size_t count2 = 0;
  for (const auto& entry : fs::recursive_directory_iterator(run2))
    if (entry.is_regular_file()) ++count2;
  r.passed = !files.empty() && mismatches == 0 && count2 == files.size();
  r.details = std::to_string(files.size()) + " artifacts compared, " +
              std::to_string(mismatches) + " mismatched";
  return r;
}

}  // namespace

AcceptanceReport run_acceptance(const RunConfig& cfg, std::ostream& log) {
  Ctx ctx;
  ctx.pinned = default_run_config();
  ctx.pinned.seed = cfg.seed;
  ctx.pinned.threads = cfg.threads;
  ctx.pinned.output_dir = cfg.output_dir;
  ctx.W = std::make_shared<RadialProfile>(solve_ground_state(ctx.pinned.params));
  ctx.levels = energy_levels(*ctx.W, ctx.pinned.quad);

  std::vector<std::function<CriterionResult()>> criteria = {
      [&] { return crit_geometry(ctx); },
      [&] { return crit_volumes(ctx); },
      [&] { return crit_spectrum(ctx, log); },
      [&] { return crit_ground_state(ctx); },
      [&] { return crit_norm_identity(ctx); },
      [&] { return crit_reciprocity(ctx); },
      [&] { return crit_decay_fit(ctx); },
      [&] { return crit_convexity(ctx); },
      [&] { return crit_sweep(ctx, log); },
      [&] { return crit_t_ratio(ctx); },
      [&] { return crit_defect_smallness(ctx); },
      [&] { return crit_minmax(ctx, log); },
      [&] { return crit_determinism(ctx, log); },
  };

  AcceptanceReport report;
  report.all_passed = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = criteria[i]();
    } catch (const std::exception& e) {
      result.id = static_cast<int>(i) + 1;
      result.name = "criterion " + std::to_string(i + 1);
      result.passed = false;
      result.details = std::string("exception: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    char line[256];
    std::snprintf(line, sizeof(line), "[%2d/13] %s  %-36s %s (%.1f s)\n",
                  result.id, result.passed ? "PASS" : "FAIL",
                  result.name.c_str(), result.details.c_str(), result.seconds);
    log << line;
    report.all_passed = report.all_passed && result.passed;
    report.results.push_back(std::move(result));
  }

  io::json criteria_json = io::json::array();
  for (const CriterionResult& result : report.results)
    criteria_json.push_back(io::json{{"id", result.id},
                                     {"name", result.name},
                                     {"passed", result.passed},
                                     {"details", result.details}});
  io::write_json(ctx.pinned.output_dir / "acceptance_report.json",
                 io::json{{"schema_version", io::kSchemaVersion},
                          {"params", io::params_json(ctx.pinned.params)},
                          {"coefficient",
                           io::coefficient_json(ctx.pinned.coefficient)},
                          {"rng", kRngAlgorithm},
                          {"seed", ctx.pinned.seed},
                          {"criteria", criteria_json},
                          {"all_passed", report.all_passed}});
  log << (report.all_passed ? "acceptance: all 13 criteria passed\n"
                            : "acceptance: FAILURES present\n");
  return report;
}

}  // namespace hypb
