#include <cmath>
#include <numbers>
#include <stdexcept>

#include <doctest.h>

#include "hypb/energy.hpp"
#include "hypb/oracles.hpp"
#include "tests/common.hpp"

using namespace hypb;

TEST_CASE("variational minimizer agrees with the shooting solver") {
  // entirely different discretization: projected descent on a uniform grid
  // vs bisection shooting; agreement localizes bugs to shared math, and the
  // minimal energy must land on the one-bubble level
  const auto var = variational_ground_state(ModelParams{});
  const auto& W = *testing::ground_state_330();
  CHECK(var.w0 == doctest::Approx(4.8988740727).epsilon(1e-6));
  CHECK(std::abs(var.w0 - W.w0()) / W.w0() <= 1e-4);
  CHECK(var.level == doctest::Approx(9.0022968820).epsilon(1e-6));
  const auto levels = energy_levels(W, QuadratureSpec{});
  CHECK(std::abs(var.level - levels.S1) / levels.S1 <= 1e-4);
  CHECK(var.theta > 0.0);
  CHECK(var.iterations > 0);
  CHECK(var.final_change < 1e-10);
}

TEST_CASE("variational minimizer tracks parameter changes") {
  const auto var =
      variational_ground_state(ModelParams{3, 2.5, 0.5}, 16.0, 0.0025);
  const RadialProfile W = solve_ground_state(ModelParams{3, 2.5, 0.5});
  CHECK(std::abs(var.w0 - W.w0()) / W.w0() <= 1e-3);
  CHECK_THROWS_AS(variational_ground_state(ModelParams{3, 3.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(variational_ground_state(ModelParams{}, -1.0),
                  std::invalid_argument);
}

TEST_CASE("monte carlo interaction brackets the quadrature value") {
  const auto& W = *testing::ground_state_330();
  const double sep = 8.0;
  const double engine = interaction(W, BallPoint::on_axis(3, sep / 2),
                                    BallPoint::on_axis(3, -sep / 2),
                                    QuadratureSpec{});
  const auto mc = mc_interaction(W, sep, 2'000'000, 20260815);
  REQUIRE(mc.std_error > 0.0);
  CHECK(mc.std_error / mc.value < 5e-3);
  CHECK(std::abs(mc.value - engine) <= 4.0 * mc.std_error);
  CHECK(mc.samples == 2'000'000);
  // deterministic for a fixed seed
  const auto again = mc_interaction(W, sep, 100'000, 99);
  const auto again2 = mc_interaction(W, sep, 100'000, 99);
  CHECK(again.value == again2.value);
  CHECK(again.std_error == again2.std_error);
  CHECK_THROWS_AS(mc_interaction(W, 8.0, 0, 1), std::invalid_argument);
}

TEST_CASE("self-refining radial integral hits a closed form") {
  QuadratureSpec coarse;
  coarse.n_radial = 32;
  const double value = refine_radial(
      [](double rho) { return std::exp(-4.0 * rho); }, 3, coarse);
  CHECK(value == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-12));
}
