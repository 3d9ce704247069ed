#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hypb/energy.hpp"
#include "hypb/minmax.hpp"
#include "tests/common.hpp"

using namespace hypb;

TEST_CASE("mass transport coefficient") {
  CHECK(mass_transport_coefficient() == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("center of mass of symmetric and shifted bubble sums") {
  const QuadratureSpec spec;
  auto W = testing::ground_state_330();
  const BubbleSum centered(W, {{BallPoint::origin(3), 1.0}});
  const BallPoint m0 = center_of_mass(centered, spec);
  CHECK(m0.rho() <= 1e-10);
  const BubbleSum sym(W, {{BallPoint::on_axis(3, 3.0), 1.0},
                          {BallPoint::on_axis(3, -3.0), 1.0}});
  CHECK(std::abs(center_of_mass(sym, spec)[0]) <= 1e-10);
  const BubbleSum shifted(W, {{BallPoint::on_axis(3, 4.0), 1.0}});
  const double m1 = center_of_mass(shifted, spec)[0];
  CHECK(m1 > 0.0);
  CHECK(m1 < 1.0);  // the functional lands inside the unit ball
  // mirrored input mirrors the output exactly
  const BubbleSum mirror(W, {{BallPoint::on_axis(3, -4.0), 1.0}});
  CHECK(center_of_mass(mirror, spec)[0] == doctest::Approx(-m1).epsilon(1e-13));
}

TEST_CASE("far-bubble center of mass approaches its closed-form limit") {
  // for a single bubble at axial distance d the functional concentrates at
  // the center: m1 -> tanh(1/2) * |x_d| / (d/2)
  const QuadratureSpec spec;
  auto W = testing::ground_state_330();
  const double d = 20.0;
  const BubbleSum far(W, {{BallPoint::on_axis(3, d), 1.0}});
  const double m1 = center_of_mass(far, spec)[0];
  const double limit = std::tanh(0.5) * ball_radius(d) / (0.5 * d);
  CHECK(std::abs(m1 - limit) <= 1e-2);
  CHECK(std::abs(m1 - limit) == doctest::Approx(0.00013148593282261145).epsilon(1e-3));
}

TEST_CASE("center of mass requires collinear centers") {
  const QuadratureSpec spec;
  auto W = testing::ground_state_330();
  const BubbleSum skew(W, {{BallPoint({0.3, 0.4, 0.0}), 1.0},
                           {BallPoint::origin(3), 1.0}});
  CHECK_THROWS_AS(center_of_mass(skew, spec), std::invalid_argument);
}

TEST_CASE("normalized segment endpoints have unit norm") {
  const QuadratureSpec spec;
  auto W = testing::ground_state_330();
  const BallPoint x1 = BallPoint::on_axis(3, 6.0);
  const BallPoint x2 = BallPoint::on_axis(3, -6.0);
  for (double t : {0.0, 0.3, 0.5, 1.0}) {
    const BubbleSum h = h_star(x1, x2, t, W, spec);
    CHECK(hlambda_inner(h, h, spec) == doctest::Approx(1.0).epsilon(1e-8));
  }
  // J is invariant under the normalization, so J(h) matches the raw segment
  const BubbleSum raw(W, {{x1, 0.3}, {x2, 0.7}});
  const auto a = CoefficientField::unit();
  const double J_raw = evaluate_energy(raw, a, spec).J;
  const double J_h = evaluate_energy(h_star(x1, x2, 0.3, W, spec), a, spec).J;
  CHECK(J_h == doctest::Approx(J_raw).epsilon(1e-10));
}

TEST_CASE("path configuration defaults and validation") {
  PathConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  // default anchor R2 - R2^{alpha'/alpha} with R2 = 12
  CHECK(cfg.x2_or_default() ==
        doctest::Approx(12.0 - std::pow(12.0, 1.1 / 1.2)).epsilon(1e-15));
  cfg.x2_rho = 7.0;
  CHECK(cfg.x2_or_default() == 7.0);
  const auto grid = cfg.t_grid_or_default();
  REQUIRE(grid.size() == 51);
  CHECK(grid.front() == 0.0);
  CHECK(grid.back() == doctest::Approx(1.0));
  cfg.R2 = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PathConfig{};
  cfg.boundary_samples = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = PathConfig{};
  cfg.x2_rho = 13.0;  // anchor outside the boundary radius
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("mountain-pass bracket for the pinned configuration") {
  const auto& W = *testing::ground_state_330();
  const QuadratureSpec spec;
  PathConfig cfg;
  cfg.a = CoefficientField::exp_defect(0.5, 3.5);
  cfg.x2_rho = 7.0;
  const auto report = minmax_bracket(cfg, W, spec);
  CHECK(report.bracket_ok);
  CHECK(report.interior_max);
  CHECK(report.sign_change);
  CHECK(report.path_max_J ==
        doctest::Approx(12.730092440916525).epsilon(1e-6));
  CHECK(report.path_max_J < report.S2);
  CHECK(report.path_max_J > report.S1);
  CHECK(report.path_argmax_t > 0.0);
  CHECK(report.path_argmax_t < 1.0);
  CHECK(report.boundary_spread <= 1e-9);
  CHECK(report.m_boundary_pos > 0.0);
  CHECK(report.m_boundary_neg < 0.0);
  REQUIRE(report.samples.size() == 51);
  for (const auto& s : report.samples) {
    CHECK(s.J <= report.path_max_J);
    CHECK(s.margin == doctest::Approx(report.S2 - s.J).epsilon(1e-15));
    CHECK(s.J < report.S2);
  }
  // the path runs from the anchor at rho = 7 to the boundary bubble at 12;
  // the center-of-mass coordinate tanh(1/2) tanh(d/2)/(d/2) shrinks with d
  CHECK(report.samples.front().m1 ==
        doctest::Approx(0.13083597796926041).epsilon(1e-9));
  CHECK(report.samples.back().m1 > 0.0);
  CHECK(report.samples.front().m1 > report.samples.back().m1);
}

TEST_CASE("bracket holds without any defect") {
  const auto& W = *testing::ground_state_330();
  QuadratureSpec spec;
  PathConfig cfg;  // a = 1
  cfg.x2_rho = 7.0;
  const auto report = minmax_bracket(cfg, W, spec);
  CHECK(report.bracket_ok);
  CHECK(report.path_max_J < report.S2);
  CHECK(report.path_max_J >= report.S1 * (1.0 - 1e-6));
  // both pure-bubble energies sit at the one-bubble level
  CHECK(report.samples.front().J <= report.S1 * (1.0 + 1e-3));
  CHECK(report.samples.back().J <= report.S1 * (1.0 + 1e-3));
}
