#pragma once

#include <string>
#include <vector>

#include "hypb/geometry.hpp"

namespace hypb {

struct SolverOptions {
  // Grid fine enough that difference-quotient residual checks are not
  // limited by the large pole-region Taylor coefficients of steep profiles.
  double grid_step = 0.002;
  double rk_step = 1e-3;  // base RK substep; shrinks further near the pole
  double bisect_rel = 1e-13;  // relative bracket width at convergence
  double residual_tol = 1e-6;
  double decay_tol = 0.02;  // end log-slope must be within this of -c
  // 0 = choose from the rate gap so that shooting-mode contamination of the
  // stored grid stays below ~1e-4 relative.
  double grid_end = 0.0;
  double shoot_end = 0.0;  // 0 = automatic
  int max_bracket_steps = 120;
  int max_bisect_steps = 240;
};

struct SolveDiagnostics {
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  int bisect_steps = 0;
  double residual_sup = 0.0;   // sup of the ODE residual on interior nodes
  double end_log_slope = 0.0;  // w'/w at the last grid node
  double tail_fit_rms = 0.0;   // rms misfit of the log-linear tail fit
  double shoot_end = 0.0;
  bool uniqueness_caveat = false;  // see note
  std::string note;
};

// Radial ground-state profile: dense (value, derivative) samples on a
// uniform grid, continued beyond the grid by a fitted exponential tail.
class RadialProfile {
 public:
  // Build from tabulated values (derivatives by finite differences). With
  // strict = true the solver-grade shape checks run (positivity, strict
  // decrease, flat derivative at 0, tail exponent near c).
  static RadialProfile from_table(const ModelParams& params,
                                  std::vector<double> grid,
                                  std::vector<double> values,
                                  double tail_amplitude, double tail_exponent,
                                  bool strict = false);

  const ModelParams& params() const { return params_; }
  double w0() const { return values_.front(); }
  double grid_end() const { return grid_end_; }
  double grid_step() const { return step_; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& derivs() const { return derivs_; }
  double tail_amplitude() const { return tail_amplitude_; }
  double tail_exponent() const { return tail_exponent_; }
  const SolveDiagnostics& diagnostics() const { return diag_; }

  double grid_node(std::size_t i) const { return step_ * static_cast<double>(i); }
  std::size_t grid_size() const { return values_.size(); }

  // Cubic Hermite inside the grid, tail model beyond; even in rho.
  double value(double rho) const;
  double derivative(double rho) const;
  double log_value(double rho) const;

  friend RadialProfile solve_ground_state(const ModelParams&,
                                          const SolverOptions&);

 private:
  RadialProfile() = default;
  void finish_tail(double fit_window);
  void check_shape() const;

  ModelParams params_;
  double step_ = 0.0;
  double grid_end_ = 0.0;
  std::vector<double> values_;
  std::vector<double> derivs_;
  double tail_amplitude_ = 0.0;
  double tail_exponent_ = 0.0;
  double log_tail_amplitude_ = 0.0;
  SolveDiagnostics diag_;
};

// Shooting solver for w'' + (N-1) coth(rho) w' + lambda w + w^p = 0 with
// w'(0) = 0 and fast decay at infinity; bisection on w(0) classifies each
// shot as crossing zero (too large) or relaxing to the slow mode (too
// small).
RadialProfile solve_ground_state(const ModelParams& params,
                                 const SolverOptions& opts = {});

}  // namespace hypb
