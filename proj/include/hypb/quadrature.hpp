#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hypb/geometry.hpp"

namespace hypb {

// Integral value plus a geometric-extrapolation estimate of the mass the
// radial truncation leaves out. The tail is diagnostic, never added back.
struct IntegralResult {
  double value = 0.0;
  double tail = 0.0;
};

struct QuadratureSpec {
  double rho_max = 40.0;
  // Target radial node count; realized as composite Gauss-Legendre panels
  // of order 16, refined near rho = 0 and near center projections.
  int n_radial = 512;
  // Angular nodes before peak grading. Two-center integrands concentrate in
  // a polar cap of width ~ e^{-min(rho, s)}; the engine grades panels
  // geometrically toward the axis until that scale (times a safety margin)
  // is resolved, down to angular_floor.
  int n_angular = 96;
  std::string rule = "gl16";
  double angular_floor = 1e-14;
  // Refine radial panels around each center projection, where near-axis
  // integrands have a smoothed kink of exponentially small width.
  bool center_graded = true;

  void validate() const;
};

// Quadrature node in geodesic polar coordinates about the origin, with the
// polar axis through all centers. dist[i] is the hyperbolic distance to the
// i-th center.
struct AxialPoint {
  double rho = 0.0;
  double theta = 0.0;
  double cos_theta = 1.0;
  double versin = 0.0;    // 2 sin^2(theta/2)
  double coversin = 2.0;  // 2 cos^2(theta/2)
  std::span<const double> dist;
};

// omega_{N-1} * int_0^{rho_max} f(rho) sinh^{N-1}(rho) drho.
IntegralResult radial_integrate(const std::function<double(double)>& f,
                                int dim, const QuadratureSpec& spec);

// Integral over B^N of a function of the distances to centers sitting at
// signed positions on a common axis through the origin (axially symmetric
// reduction). F fills out[0..n_out): all outputs share one grid pass.
using AxialIntegrand = std::function<void(const AxialPoint&, double* out)>;
std::vector<IntegralResult> axial_integrate_many(
    const AxialIntegrand& F, int n_out, std::span<const double> centers,
    int dim, const QuadratureSpec& spec);

IntegralResult axial_integrate(
    const std::function<double(const AxialPoint&)>& F,
    std::span<const double> centers, int dim, const QuadratureSpec& spec);

// Two-center integral of F(d1, d2); the centers are mapped to axial
// positions {0, d(b1,b2)}, which is exact for distance-only integrands.
// Coincident centers fall back to the one-center radial reduction.
IntegralResult biaxial_integrate(const std::function<double(double, double)>& F,
                                 const BallPoint& b1, const BallPoint& b2,
                                 int dim, const QuadratureSpec& spec);

}  // namespace hypb
