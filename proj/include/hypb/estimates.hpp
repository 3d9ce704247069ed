#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hypb/energy.hpp"
#include "hypb/geometry.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace hypb {

// Sweep of the two-bubble energy J(t u1 + (1-t) u2) over center distances,
// separations, and mixing parameters, with the defect-vs-interaction
// bookkeeping that drives the level comparison against S2.
struct LemmaSweepConfig {
  ModelParams params;
  CoefficientField a = CoefficientField::unit();
  double K = 0.0;  // 0 selects the midpoint of (0, (p+1) - (N-1)/c)
  double alpha = 1.2;
  double alpha_prime = 1.1;
  double R = 8.0;
  std::vector<double> center_rhos;
  std::vector<double> separations;
  std::vector<double> t_grid;  // empty selects 0..1 in steps of 0.02
  bool strict_regime = false;

  void validate() const;
  double K_or_default() const;
  std::vector<double> t_grid_or_default() const;
  // admissible separation interval [R^alpha', R^{alpha'-alpha} * rho] for a
  // row whose nearer center sits at distance rho
  std::pair<double, double> separation_window(double center_rho) const;
};

struct SweepRow {
  double t = 0.0;
  double separation = 0.0;
  std::pair<double, double> center_rhos{0.0, 0.0};  // (far, near)
  double J_value = 0.0;
  double J_inf = 0.0;
  double S2 = 0.0;
  double margin = 0.0;  // S2 - J_value, recorded even when negative
  double interaction = 0.0;
  double defect = 0.0;
  double defect_over_interaction = 0.0;
  bool in_window = true;
  bool skipped = false;
  std::string skip_reason;
};

struct SweepEndpoint {
  double separation = 0.0;
  std::pair<double, double> center_rhos{0.0, 0.0};
  double J0_rel = 0.0;  // |J(0) - S1| / S1
  double J1_rel = 0.0;
  double argmax_t = 0.0;
  double max_J = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<SweepEndpoint> endpoints;
  double S1 = 0.0;
  double S2 = 0.0;
  double min_margin = 0.0;  // over rows actually evaluated
  std::pair<double, double> delta_window{0.0, 0.0};
  bool delta_in_window = true;
  std::vector<std::string> warnings;
};

// (a+b)^{p+1} - a^{p+1} - b^{p+1} - p (a^p b + a b^p); nonnegative for
// a, b >= 0 and p > 1.
double convex_inequality_check(double a_val, double b_val, double p);

struct DecaySandwich {
  double C1 = 0.0;  // inf over the grid of w(rho) e^{(c+eps) rho}
  double C2 = 0.0;  // sup over the grid of w(rho) e^{(c-eps) rho}
  double eps = 0.0;
};

DecaySandwich decay_sandwich_check(const RadialProfile& W, double eps);

struct InteractionFit {
  std::vector<double> separations;
  std::vector<double> values;  // int u1^p u2 at each separation
  std::vector<double> scaled;  // values[i] * e^{(c+eps) d_i}
  double fitted_exponent = 0.0;
  double scaled_min = 0.0;
  double eps = 0.0;
  bool positive_lower_bound = false;
  bool exponent_in_range = false;  // within [-(c+eps), -(c-eps)]
};

InteractionFit interaction_lower_bound_check(
    const RadialProfile& W, const std::vector<double>& separations, double eps,
    const QuadratureSpec& spec);

SweepReport key_lemma_sweep(const LemmaSweepConfig& cfg,
                            const RadialProfile& W, const QuadratureSpec& spec,
                            int threads = 1);

// phi(t) = (t^2 + (1-t)^2) / (t^{p+1} + (1-t)^{p+1})^{2/(p+1)}, the scalar
// mixing profile whose supremum 2^{(p-1)/(p+1)} is attained only at t = 1/2.
std::vector<double> t_ratio_profile(double p, const std::vector<double>& t_grid);

double t_ratio_bound(double p);

}  // namespace hypb
