#include <cmath>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hypb/profile.hpp"
#include "tests/common.hpp"

using namespace hypb;

TEST_CASE("cubic model ground state matches its closed form") {
  // w(rho) = sqrt(3/2) / (1/4 + sinh^2 rho) solves the N=3, p=3, lambda=0
  // equation exactly: w(0) = sqrt(24) and w ~ sqrt(24) e^{-2 rho}
  const RadialProfile& W = *testing::ground_state_330();
  CHECK(W.w0() == doctest::Approx(std::sqrt(24.0)).epsilon(1e-10));
  CHECK(W.diagnostics().residual_sup <= 1e-6);
  CHECK(W.tail_exponent() == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(W.tail_amplitude() == doctest::Approx(std::sqrt(24.0)).epsilon(1e-3));
  // interior points, including between grid nodes
  for (double rho : {0.37, 1.0, 2.133, 5.0}) {
    const double S = std::pow(std::sinh(rho), 2);
    const double exact = std::sqrt(1.5) / (0.25 + S);
    CHECK(W.value(rho) == doctest::Approx(exact).epsilon(1e-9));
    const double dexact =
        -std::sqrt(1.5) * std::sinh(2.0 * rho) / std::pow(0.25 + S, 2);
    CHECK(W.derivative(rho) == doctest::Approx(dexact).epsilon(1e-9));
  }
  // near the grid end the stored values hand over to the fitted tail
  const double far = 9.5;
  const double exact_far =
      std::sqrt(1.5) / (0.25 + std::pow(std::sinh(far), 2));
  CHECK(W.value(far) == doctest::Approx(exact_far).epsilon(1e-5));
}

TEST_CASE("profile shape: even, positive, strictly decreasing") {
  const RadialProfile& W = *testing::ground_state_330();
  CHECK(W.value(-1.3) == doctest::Approx(W.value(1.3)).epsilon(1e-15));
  CHECK(W.derivative(0.0) == doctest::Approx(0.0).epsilon(1e-10));
  double prev = W.w0();
  for (std::size_t i = 1; i < W.grid_size(); ++i) {
    CHECK(W.values()[i] > 0.0);
    CHECK(W.values()[i] < prev);
    prev = W.values()[i];
  }
}

TEST_CASE("tail continuation is seamless") {
  const RadialProfile& W = *testing::ground_state_330();
  const double end = W.grid_end();
  const double inside = W.value(end - 1e-9);
  const double outside = W.value(end + 1e-9);
  CHECK(outside / inside == doctest::Approx(1.0).epsilon(1e-6));
  // far out the tail is a pure exponential with the fitted rate
  const double r1 = 2.0 * end;
  CHECK(W.log_value(r1 + 1.0) - W.log_value(r1) ==
        doctest::Approx(-W.tail_exponent()).epsilon(1e-12));
}

TEST_CASE("interior model with interior spectral shift") {
  // N=3, p=2.5, lambda=0.5: decay rate c = 1 + sqrt(1/2)
  const ModelParams params{3, 2.5, 0.5};
  const RadialProfile W = solve_ground_state(params);
  const double c = 1.0 + std::sqrt(0.5);
  CHECK(W.diagnostics().residual_sup <= 1e-6);
  CHECK(W.tail_exponent() == doctest::Approx(c).epsilon(2e-4));
  CHECK(W.w0() > 0.0);
  CHECK(W.diagnostics().uniqueness_caveat == false);
}

TEST_CASE("planar model flags the uniqueness caveat in the shallow range") {
  // N = 2 admits non-unique fast-decay profiles once lambda exceeds
  // 2(p+1)/(p+3)^2; the solver must still converge but say so
  const RadialProfile W = solve_ground_state(ModelParams{2, 3.0, 0.24});
  CHECK(W.diagnostics().uniqueness_caveat == true);
  CHECK(W.diagnostics().note.size() > 0);
  CHECK(W.diagnostics().residual_sup <= 1e-6);
  CHECK(W.tail_exponent() == doctest::Approx(0.6).epsilon(1e-3));
  // below the threshold no caveat is raised
  const RadialProfile W0 = solve_ground_state(ModelParams{2, 3.0, 0.0});
  CHECK(W0.diagnostics().uniqueness_caveat == false);
}

TEST_CASE("inadmissible parameters are rejected up front") {
  CHECK_THROWS_AS(solve_ground_state(ModelParams{3, 3.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(solve_ground_state(ModelParams{3, 6.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("tabulated rebuild reproduces the solved profile") {
  const RadialProfile& W = *testing::ground_state_330();
  std::vector<double> grid(W.grid_size()), vals(W.grid_size());
  for (std::size_t i = 0; i < W.grid_size(); ++i) {
    grid[i] = W.grid_node(i);
    vals[i] = W.values()[i];
  }
  const RadialProfile rebuilt = RadialProfile::from_table(
      W.params(), grid, vals, W.tail_amplitude(), W.tail_exponent(), true);
  CHECK(rebuilt.w0() == W.w0());
  for (double rho : {0.4, 1.9, 6.7}) {
    CHECK(rebuilt.value(rho) == doctest::Approx(W.value(rho)).epsilon(1e-9));
    CHECK(rebuilt.derivative(rho) ==
          doctest::Approx(W.derivative(rho)).epsilon(1e-5));
  }
  CHECK(rebuilt.value(2.0 * W.grid_end()) ==
        doctest::Approx(W.value(2.0 * W.grid_end())).epsilon(1e-12));
}

TEST_CASE("tabulated rebuild validates its inputs") {
  const ModelParams params{};
  CHECK_THROWS_AS(RadialProfile::from_table(params, {0.0, 0.1, 0.25},
                                            {1.0, 0.9, 0.8}, 1.0, 2.0),
                  std::invalid_argument);  // non-uniform grid
  CHECK_THROWS_AS(
      RadialProfile::from_table(params, {0.1, 0.2}, {1.0, 0.9}, 1.0, 2.0),
      std::invalid_argument);  // grid must start at 0
  CHECK_THROWS_AS(RadialProfile::from_table(params, {0.0, 0.1}, {1.0}, 1.0, 2.0),
                  std::invalid_argument);  // size mismatch
  // strict shape checks reject a non-monotone table
  std::vector<double> grid, vals;
  for (int i = 0; i <= 100; ++i) {
    grid.push_back(0.05 * i);
    vals.push_back(std::exp(-2.0 * grid.back()));
  }
  vals[50] = vals[49] * 1.5;
  CHECK_THROWS_WITH_AS(
      RadialProfile::from_table(params, grid, vals, 1.0, 2.0, true),
      doctest::Contains("not strictly decreasing"), std::runtime_error);
}
