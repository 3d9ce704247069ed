#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hypb/energy.hpp"
#include "hypb/geometry.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace hypb {

// Mountain-pass verification data: a segment of normalized two-bubble
// combinations between an interior anchor and a boundary bubble, whose
// maximal energy is pinned strictly between the one- and two-bubble levels.
struct PathConfig {
  ModelParams params;
  CoefficientField a = CoefficientField::unit();
  double R2 = 12.0;      // boundary radius in rho units
  double x2_rho = -1.0;  // interior anchor; < 0 selects R2 - R2^{ap/al}
  double alpha = 1.2;
  double alpha_prime = 1.1;
  std::vector<double> t_grid;  // empty selects 0..1 in steps of 0.02
  int boundary_samples = 4;

  void validate() const;
  double x2_or_default() const;
  std::vector<double> t_grid_or_default() const;
};

struct PathSample {
  double t = 0.0;
  double J = 0.0;
  double margin = 0.0;  // S2 - J
  double m1 = 0.0;      // first center-of-mass coordinate
};

struct MinmaxReport {
  double S1 = 0.0;
  double S2 = 0.0;
  double boundary_max_J = 0.0;
  double path_max_J = 0.0;
  double path_argmax_t = 0.0;
  bool interior_max = false;
  bool bracket_ok = false;      // S1 < path_max_J < S2
  bool sign_change = false;     // m1 flips across opposite boundary bubbles
  double m_boundary_pos = 0.0;  // m1 of the bubble at +R2 on the axis
  double m_boundary_neg = 0.0;
  double boundary_spread = 0.0;  // relative spread of boundary energies
  std::vector<PathSample> samples;
};

// Normalized center of mass with kernel x/(k d(x,0)), k = 1/2; centers must
// be collinear through the origin, so the result lies on the first axis.
BallPoint center_of_mass(const BubbleSum& u, const QuadratureSpec& spec);

// Numerical supremum of |x|/d(x,0) over the ball, attained in the limit at
// the origin; equals 1/2.
double mass_transport_coefficient();

// (t w(tau_{-x1}) + (1-t) w(tau_{-x2})) scaled to unit H_lambda norm.
BubbleSum h_star(const BallPoint& x1, const BallPoint& x2, double t,
                 const std::shared_ptr<const RadialProfile>& W,
                 const QuadratureSpec& spec);

MinmaxReport minmax_bracket(const PathConfig& cfg,
                            const RadialProfile& W, const QuadratureSpec& spec);

}  // namespace hypb
