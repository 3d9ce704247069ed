#pragma once

#include <cstdint>
#include <functional>

#include "hypb/geometry.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace hypb {

// Independent cross-checks for the shooting solver and the quadrature
// engine; none of these share code paths with what they validate.

struct VariationalResult {
  double w0 = 0.0;     // central height after the theta rescaling
  double level = 0.0;  // minimal Rayleigh-type energy of the discrete problem
  double theta = 0.0;  // scaling factor theta^{p-1} = ||v||^2 / int v^{p+1}
  int iterations = 0;
  double final_change = 0.0;  // last relative energy decrement
  double grid_step = 0.0;
  double domain = 0.0;
};

// Minimizes int(|v'|^2 - lambda v^2) / (int v^{p+1})^{2/(p+1)} over
// nonnegative radial grid functions by preconditioned projected descent,
// then rescales the minimizer to solve the unnormalized equation.
VariationalResult variational_ground_state(const ModelParams& params,
                                           double domain = 16.0,
                                           double grid_step = 0.00125,
                                           int max_iter = 5000);

struct McResult {
  double value = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
};

// Monte Carlo estimate of int w(d(x,b1))^p w(d(x,b2)) dV at the given
// separation, importance-sampled from a two-cluster mixture around the
// centers; deterministic for a fixed seed.
McResult mc_interaction(const RadialProfile& W, double separation,
                        std::uint64_t samples, std::uint64_t seed);

// Self-convergence reference: doubles the radial node count until the
// integral changes by less than rel_tol.
double refine_radial(const std::function<double(double)>& f, int dim,
                     QuadratureSpec spec, double rel_tol = 1e-12,
                     int max_doublings = 6);

}  // namespace hypb
