#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "hypb/energy.hpp"
#include "tests/common.hpp"

using namespace hypb;

namespace {

BubbleSum single_bubble(double coeff = 1.0) {
  return BubbleSum(testing::ground_state_330(),
                   {{BallPoint::origin(3), coeff}});
}

BubbleSum pair_bubbles(double s1, double s2, double c1 = 1.0,
                       double c2 = 1.0) {
  return BubbleSum(testing::ground_state_330(),
                   {{BallPoint::on_axis(3, s1), c1},
                    {BallPoint::on_axis(3, s2), c2}});
}

}  // namespace

TEST_CASE("single-bubble norm equals its nonlinear mass") {
  // multiplying the equation by w and integrating by parts gives
  // int(|grad w|^2 - lambda w^2) = int w^{p+1}
  const auto na = norm_A(*testing::ground_state_330(), QuadratureSpec{});
  CHECK(na.A == doctest::Approx(81.04133344446228).epsilon(1e-10));
  CHECK(na.discrepancy <= 1e-6);
  CHECK(na.stale == false);
}

TEST_CASE("energy levels and their exact relations") {
  const auto levels =
      energy_levels(*testing::ground_state_330(), QuadratureSpec{}, 4);
  // S1 = A^{(p-1)/(p+1)} with p = 3
  CHECK(levels.S1 == doctest::Approx(std::sqrt(levels.A)).epsilon(1e-15));
  CHECK(levels.S1 == doctest::Approx(9.002296009600123).epsilon(1e-10));
  CHECK(levels.S2 == doctest::Approx(std::sqrt(2.0) * levels.S1).epsilon(1e-15));
  REQUIRE(levels.Sm.size() == 4);
  CHECK(levels.Sm[0] == doctest::Approx(levels.S1).epsilon(1e-15));
  CHECK(levels.Sm[1] == doctest::Approx(levels.S2).epsilon(1e-15));
  for (std::size_t m = 1; m < levels.Sm.size(); ++m)
    CHECK(levels.Sm[m] > levels.Sm[m - 1]);
  CHECK(ps_level(1.5, {2.0, 3.0}) == doctest::Approx(6.5));
}

TEST_CASE("inner products are symmetric and bilinear") {
  const QuadratureSpec spec;
  const BubbleSum u = pair_bubbles(2.0, -1.0, 1.0, 0.5);
  const BubbleSum v = single_bubble();
  CHECK(hlambda_inner(u, v, spec) ==
        doctest::Approx(hlambda_inner(v, u, spec)).epsilon(1e-13));
  CHECK(mass_inner(u, v, spec) ==
        doctest::Approx(mass_inner(v, u, spec)).epsilon(1e-13));
  CHECK(hlambda_inner(u.scaled(3.0), v, spec) ==
        doctest::Approx(3.0 * hlambda_inner(u, v, spec)).epsilon(1e-13));
  // Cauchy-Schwarz in the H_lambda pairing
  const double uu = hlambda_inner(u, u, spec);
  const double vv = hlambda_inner(v, v, spec);
  const double uv = hlambda_inner(u, v, spec);
  CHECK(uv * uv <= uu * vv * (1.0 + 1e-12));
}

TEST_CASE("self inner product matches the nonlinear mass identity") {
  const QuadratureSpec spec;
  const BubbleSum u = single_bubble();
  const auto na = norm_A(*testing::ground_state_330(), spec);
  CHECK(hlambda_inner(u, u, spec) == doctest::Approx(na.A).epsilon(1e-6));
}

TEST_CASE("cross inner product equals the weighted interaction") {
  // pairing the equation for W(d1) against W(d2) turns <u1,u2>_{H_lambda}
  // into int W(d1)^p W(d2)
  const QuadratureSpec spec;
  const auto& W = *testing::ground_state_330();
  const BallPoint b1 = BallPoint::on_axis(3, 3.0);
  const BallPoint b2 = BallPoint::on_axis(3, -3.0);
  const BubbleSum u1(testing::ground_state_330(), {{b1, 1.0}});
  const BubbleSum u2(testing::ground_state_330(), {{b2, 1.0}});
  const double inner = hlambda_inner(u1, u2, spec);
  const double q = interaction(W, b1, b2, spec);
  CHECK(inner == doctest::Approx(q).epsilon(1e-5));
}

TEST_CASE("interaction integral: symmetry, positivity, pinned value") {
  const QuadratureSpec spec;
  const auto& W = *testing::ground_state_330();
  const BallPoint b1 = BallPoint::on_axis(3, 5.0);
  const BallPoint b2 = BallPoint::on_axis(3, -3.0);
  const double q12 = interaction(W, b1, b2, spec);
  const double q21 = interaction(W, b2, b1, spec);
  CHECK(q12 > 0.0);
  CHECK(q12 == doctest::Approx(q21).epsilon(1e-9));
  const double q8 = interaction(W, BallPoint::on_axis(3, 4.0),
                                BallPoint::on_axis(3, -4.0), spec);
  CHECK(q8 == doctest::Approx(1.6969907128434766e-5).epsilon(1e-9));
}

TEST_CASE("energy report for a single bubble hits the critical level") {
  const QuadratureSpec spec;
  const auto rep = evaluate_energy(single_bubble(), CoefficientField::unit(), spec);
  const auto levels = energy_levels(*testing::ground_state_330(), spec);
  CHECK(rep.J == doctest::Approx(levels.S1).epsilon(1e-9));
  CHECK(rep.J == doctest::Approx(rep.J_inf).epsilon(1e-15));
  CHECK(rep.defect == doctest::Approx(0.0));
  // I = norm/2 - mass/(p+1) = A/4 for p = 3
  CHECK(rep.I == doctest::Approx(levels.A / 4.0).epsilon(1e-9));
}

TEST_CASE("quotient is scale and translation invariant") {
  const QuadratureSpec spec;
  const auto a = CoefficientField::unit();
  const auto rep1 = evaluate_energy(pair_bubbles(3.0, -3.0), a, spec);
  const auto rep2 = evaluate_energy(pair_bubbles(3.0, -3.0).scaled(2.0), a, spec);
  CHECK(rep2.J == doctest::Approx(rep1.J).epsilon(1e-13));
  CHECK(rep2.norm_sq_lambda ==
        doctest::Approx(4.0 * rep1.norm_sq_lambda).epsilon(1e-13));
  // sliding the pair along the axis preserves J_inf (a = 1 everywhere)
  const auto rep3 = evaluate_energy(pair_bubbles(5.0, -1.0), a, spec);
  CHECK(rep3.J_inf == doctest::Approx(rep1.J_inf).epsilon(1e-9));
}

TEST_CASE("two coincident bubbles recover the one-bubble quotient") {
  // u = 2 W has the same J as W
  const QuadratureSpec spec;
  const auto rep =
      evaluate_energy(single_bubble(2.0), CoefficientField::unit(), spec);
  const auto levels = energy_levels(*testing::ground_state_330(), spec);
  CHECK(rep.J == doctest::Approx(levels.S1).epsilon(1e-9));
}

TEST_CASE("coefficient families evaluate and validate") {
  const auto unit = CoefficientField::unit();
  CHECK(unit.value(3.0) == 1.0);
  CHECK(unit.defect(3.0) == 0.0);
  const auto a = CoefficientField::exp_defect(0.5, 3.5);
  CHECK(a.value(0.0) == doctest::Approx(0.5));
  CHECK(a.value(2.0) == doctest::Approx(1.0 - 0.5 * std::exp(-7.0)).epsilon(1e-15));
  CHECK(a.defect(2.0) == doctest::Approx(0.5 * std::exp(-7.0)).epsilon(1e-15));
  CHECK_THROWS_AS(CoefficientField::exp_defect(1.5, 3.5), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::exp_defect(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(CoefficientField::radial_table({0.0, 1.0}, {1.0}),
                  std::invalid_argument);
  const auto tab = CoefficientField::radial_table({0.0, 1.0, 2.0},
                                                  {0.4, 0.7, 1.0});
  CHECK(tab.value(0.5) == doctest::Approx(0.55));
  CHECK(tab.value(10.0) == 1.0);
}

TEST_CASE("defect decay window for the cubic model") {
  // (K c + N - 1, (p+1) c) = (K 2 + 2, 8) for N=3, p=3, lambda=0
  const auto win = CoefficientField::delta_window(ModelParams{}, 1.5);
  CHECK(win.first == doctest::Approx(5.0));
  CHECK(win.second == doctest::Approx(8.0));
}

TEST_CASE("defect integral responds to the coefficient") {
  const QuadratureSpec spec;
  const BubbleSum u = pair_bubbles(4.0, -4.0);
  CHECK(defect_integral(u, CoefficientField::unit(), spec) == 0.0);
  const double d35 =
      defect_integral(u, CoefficientField::exp_defect(0.5, 3.5), spec);
  const double d50 =
      defect_integral(u, CoefficientField::exp_defect(0.5, 5.0), spec);
  CHECK(d35 > 0.0);
  CHECK(d50 > 0.0);
  CHECK(d50 < d35);  // steeper defect sees less of the bubble pair
  const auto rep =
      evaluate_energy(u, CoefficientField::exp_defect(0.5, 3.5), spec);
  CHECK(rep.defect == doctest::Approx(d35).epsilon(1e-12));
  CHECK(rep.nonlinear_a ==
        doctest::Approx(rep.nonlinear_unit - rep.defect).epsilon(1e-13));
}

TEST_CASE("rayleigh quotients against a closed form") {
  // f = e^{-beta rho} in H^3: int |f'|^2 sinh^2 / int f^2 sinh^2 = beta^2
  // once beta > 1 makes both integrals converge (exact cancellation of the
  // sinh weights happens in the ratio of the same Gamma-type integrals)
  const QuadratureSpec spec;
  const double beta = 1.5;
  const double rq = rayleigh_radial(
      [beta](double rho) { return std::exp(-beta * rho); },
      [beta](double rho) { return -beta * std::exp(-beta * rho); }, 3, spec);
  CHECK(rq == doctest::Approx(beta * beta).epsilon(1e-10));
  // a bubble sum quotient sits above the spectral bottom (N-1)^2/4 = 1
  const double rb = rayleigh_bubble_sum(pair_bubbles(2.0, -2.0), spec);
  CHECK(rb > 1.0);
}

TEST_CASE("two-center atoms reproduce the direct quotient") {
  const QuadratureSpec spec;
  const auto& W = *testing::ground_state_330();
  const auto atoms =
      two_center_atoms(W, 4.0, -4.0, CoefficientField::exp_defect(0.5, 3.5),
                       spec, true);
  REQUIRE(atoms.P1 == 4);
  REQUIRE(atoms.M.size() == 5);
  // endpoints of the segment are pure translates
  CHECK(atoms.J_inf_of(0.0) == doctest::Approx(atoms.S1_ref()).epsilon(1e-12));
  CHECK(atoms.J_inf_of(1.0) == doctest::Approx(atoms.S1_ref()).epsilon(1e-12));
  // midpoint against the direct evaluation
  const BubbleSum mid = pair_bubbles(4.0, -4.0, 0.5, 0.5);
  const auto rep =
      evaluate_energy(mid, CoefficientField::exp_defect(0.5, 3.5), spec);
  CHECK(atoms.J_of(0.5) == doctest::Approx(rep.J).epsilon(1e-10));
  CHECK(atoms.J_inf_of(0.5) == doctest::Approx(rep.J_inf).epsilon(1e-10));
  CHECK(atoms.defect_of(0.5) == doctest::Approx(rep.defect).epsilon(1e-8));
  // M[3] is the interaction integral int u1^3 u2
  const double q = interaction(W, BallPoint::on_axis(3, 4.0),
                               BallPoint::on_axis(3, -4.0), spec);
  CHECK(atoms.M[3] == doctest::Approx(q).epsilon(1e-8));
  // center of mass interpolates between the two centers with the right sign
  CHECK(atoms.m1_of(0.0) < 0.0);  // all mass at s2 = -4
  CHECK(atoms.m1_of(1.0) > 0.0);
  CHECK(std::abs(atoms.m1_of(0.0) + atoms.m1_of(1.0)) < 1e-10);
}

TEST_CASE("center-of-mass kernel limits") {
  CHECK(com_kernel(0.0) == 1.0);
  CHECK(com_kernel(1e-9) == doctest::Approx(1.0).epsilon(1e-12));
  // tanh(rho/2)/(rho/2) at rho = 2
  CHECK(com_kernel(2.0) == doctest::Approx(std::tanh(1.0)).epsilon(1e-15));
  CHECK(com_kernel(40.0) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("bubble sums validate their terms") {
  auto W = testing::ground_state_330();
  CHECK_THROWS_AS(BubbleSum(W, {{BallPoint::origin(3), -1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BubbleSum(W, {{BallPoint::origin(2), 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BubbleSum(nullptr, {{BallPoint::origin(3), 1.0}}),
                  std::invalid_argument);
  const BubbleSum off_axis(
      W, {{BallPoint({0.1, 0.2, 0.0}), 1.0}, {BallPoint::origin(3), 1.0}});
  CHECK(!off_axis.axial_positions().has_value());
  const BubbleSum on(W, {{BallPoint::on_axis(3, 2.0), 1.0},
                         {BallPoint::on_axis(3, -1.0), 1.0}});
  const auto pos = on.axial_positions();
  REQUIRE(pos.has_value());
  CHECK((*pos)[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK((*pos)[1] == doctest::Approx(-1.0).epsilon(1e-12));
}
