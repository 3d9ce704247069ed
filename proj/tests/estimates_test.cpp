#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hypb/estimates.hpp"
#include "tests/common.hpp"

using namespace hypb;

TEST_CASE("convexity surplus of the split power") {
  // (a+b)^{p+1} - a^{p+1} - b^{p+1} - p(a^p b + a b^p) at p = 3:
  // expand (a+b)^4 => 6 a^2 b^2 + (4-3)(a^3 b + a b^3)
  CHECK(convex_inequality_check(1.0, 1.0, 3.0) == doctest::Approx(8.0));
  CHECK(convex_inequality_check(2.0, 0.0, 3.0) == doctest::Approx(0.0));
  CHECK(convex_inequality_check(0.0, 5.0, 2.5) == doctest::Approx(0.0));
  for (double p : {1.5, 2.0, 3.0, 4.0})
    for (double a : {0.1, 1.0, 7.0})
      for (double b : {0.2, 3.0}) {
        const double scale = std::pow(a + b, p + 1);
        CHECK(convex_inequality_check(a, b, p) >= -1e-12 * scale);
      }
}

TEST_CASE("two-sided decay envelope of the solved profile") {
  const auto& W = *testing::ground_state_330();
  const auto sand = decay_sandwich_check(W, 0.5);
  // C1 e^{-(c+eps) rho} <= w <= C2 e^{-(c-eps) rho}; at rho = 0 the lower
  // envelope is tightest, so C1 = w(0)
  CHECK(sand.C1 == doctest::Approx(W.w0()).epsilon(1e-12));
  CHECK(sand.C2 >= sand.C1);
  CHECK(sand.eps == 0.5);
  CHECK_THROWS_AS(decay_sandwich_check(W, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(decay_sandwich_check(W, 2.0), std::invalid_argument);
}

TEST_CASE("decay envelope is exact for a synthetic pure exponential") {
  std::vector<double> grid, vals;
  for (int i = 0; i <= 4000; ++i) {
    grid.push_back(0.005 * i);
    vals.push_back(std::exp(-2.0 * grid.back()));
  }
  const auto tab =
      RadialProfile::from_table(ModelParams{}, grid, vals, 1.0, 2.0);
  const auto sand = decay_sandwich_check(tab, 0.3);
  CHECK(sand.C1 == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(sand.C2 == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("interaction decays at the sharp exponential rate") {
  const auto& W = *testing::ground_state_330();
  const std::vector<double> seps{6.0, 8.0, 10.0, 12.0, 14.0};
  const auto fit =
      interaction_lower_bound_check(W, seps, 0.1, QuadratureSpec{});
  CHECK(fit.fitted_exponent ==
        doctest::Approx(-2.000003241089979).epsilon(1e-6));
  CHECK(fit.exponent_in_range);
  CHECK(fit.positive_lower_bound);
  CHECK(fit.scaled_min > 0.0);
  REQUIRE(fit.values.size() == seps.size());
  for (std::size_t i = 1; i < fit.values.size(); ++i)
    CHECK(fit.values[i] < fit.values[i - 1]);
}

TEST_CASE("interaction fit validates its inputs") {
  const auto& W = *testing::ground_state_330();
  CHECK_THROWS_AS(
      interaction_lower_bound_check(W, {6.0}, 0.1, QuadratureSpec{}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      interaction_lower_bound_check(W, {2.0, 3.0}, 0.1, QuadratureSpec{}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      interaction_lower_bound_check(W, {6.0, 8.0}, 3.0, QuadratureSpec{}),
      std::invalid_argument);
}

TEST_CASE("interaction fit is stable under quadrature refinement") {
  const auto& W = *testing::ground_state_330();
  const std::vector<double> seps{6.0, 10.0, 14.0};
  QuadratureSpec spec;
  const auto base = interaction_lower_bound_check(W, seps, 0.1, spec);
  spec.n_radial *= 2;
  spec.n_angular *= 2;
  const auto fine = interaction_lower_bound_check(W, seps, 0.1, spec);
  CHECK(std::abs(fine.fitted_exponent - base.fitted_exponent) < 1e-3);
}

TEST_CASE("sweep configuration windows and defaults") {
  LemmaSweepConfig cfg;
  cfg.center_rhos = {12.0};
  cfg.separations = {8.0};
  CHECK_NOTHROW(cfg.validate());
  // K = 0 selects the midpoint of (0, (p+1) - (N-1)/c) = (0, 3)
  CHECK(cfg.K_or_default() == doctest::Approx(1.5));
  const auto grid = cfg.t_grid_or_default();
  REQUIRE(grid.size() == 51);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1.0));
  // window [R^alpha', R^{alpha'-alpha} rho] with R=8, alpha=1.2, alpha'=1.1
  const auto win = cfg.separation_window(12.0);
  CHECK(win.first == doctest::Approx(std::pow(8.0, 1.1)).epsilon(1e-15));
  CHECK(win.second ==
        doctest::Approx(std::pow(8.0, -0.1) * 12.0).epsilon(1e-15));
  cfg.alpha_prime = 1.3;  // must stay below alpha
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = LemmaSweepConfig{};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);  // empty rows
}

TEST_CASE("key-lemma sweep keeps the mixed level below S2") {
  const auto& W = *testing::ground_state_330();
  LemmaSweepConfig cfg;
  cfg.a = CoefficientField::exp_defect(0.5, 3.5);
  cfg.center_rhos = {12.0};
  cfg.separations = {8.0, 10.0};
  cfg.t_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
  const auto report = key_lemma_sweep(cfg, W, QuadratureSpec{}, 2);
  REQUIRE(report.rows.size() == 10);
  CHECK(report.min_margin > 0.0);
  CHECK(report.S2 == doctest::Approx(std::sqrt(2.0) * report.S1).epsilon(1e-15));
  for (const auto& row : report.rows) {
    CHECK(!row.skipped);
    CHECK(row.margin == row.S2 - row.J_value);
    CHECK(row.S2 == doctest::Approx(report.S2).epsilon(1e-12));
    CHECK(row.interaction > 0.0);
    CHECK(row.defect >= 0.0);
    // defect shrinks much faster than the interaction out at rho = 12
    CHECK(row.defect_over_interaction < 1e-6);
  }
  // endpoints t = 0, 1 are single translated bubbles at level S1
  REQUIRE(report.endpoints.size() == 2);
  for (const auto& ep : report.endpoints) {
    CHECK(ep.J0_rel <= 1e-4);
    CHECK(ep.J1_rel <= 1e-4);
    CHECK(ep.max_J < report.S2);
    CHECK(ep.argmax_t > 0.0);
    CHECK(ep.argmax_t < 1.0);
  }
  // the sum stays strictly above the single-bubble level in between
  CHECK(report.min_margin < report.S2 - report.S1);
}

TEST_CASE("strict regime skips rows outside the admissible window") {
  const auto& W = *testing::ground_state_330();
  LemmaSweepConfig cfg;
  cfg.center_rhos = {12.0};
  cfg.separations = {4.5};  // below R^alpha' ~ 9.8
  cfg.t_grid = {0.5};
  cfg.strict_regime = true;
  const auto report = key_lemma_sweep(cfg, W, QuadratureSpec{}, 1);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].skipped);
  CHECK(!report.rows[0].in_window);
  CHECK(report.rows[0].skip_reason.size() > 0);
  // permissive mode evaluates the same row and flags it
  cfg.strict_regime = false;
  const auto loose = key_lemma_sweep(cfg, W, QuadratureSpec{}, 1);
  CHECK(!loose.rows[0].skipped);
  CHECK(!loose.rows[0].in_window);
}

TEST_CASE("sweep rejects a profile solved for other parameters") {
  const RadialProfile other = solve_ground_state(ModelParams{3, 2.5, 0.5});
  LemmaSweepConfig cfg;
  cfg.center_rhos = {12.0};
  cfg.separations = {8.0};
  CHECK_THROWS_AS(key_lemma_sweep(cfg, other, QuadratureSpec{}, 1),
                  std::invalid_argument);
}

TEST_CASE("scalar mixing profile peaks only at the midpoint") {
  for (double p : {1.5, 2.0, 3.0, 4.0}) {
    const double bound = t_ratio_bound(p);
    CHECK(bound == doctest::Approx(std::pow(2.0, (p - 1) / (p + 1))).epsilon(1e-15));
    std::vector<double> grid;
    for (int i = 0; i <= 200; ++i) grid.push_back(i / 200.0);
    const auto vals = t_ratio_profile(p, grid);
    REQUIRE(vals.size() == grid.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
      CHECK(vals[i] <= bound * (1.0 + 1e-14));
      // symmetry about 1/2
      CHECK(vals[i] == doctest::Approx(vals[vals.size() - 1 - i]).epsilon(1e-14));
    }
    CHECK(vals[100] == doctest::Approx(bound).epsilon(1e-14));
    CHECK(vals[0] == doctest::Approx(1.0));
    CHECK(vals[99] < bound);
  }
  CHECK(t_ratio_bound(3.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK_THROWS_AS(t_ratio_bound(1.0), std::invalid_argument);
}
