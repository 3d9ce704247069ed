#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace hypb {

// Parameters of the scalar field model on the N-dimensional Poincare ball:
//   -Delta_B u - lambda u = u^p,  u > 0.
// Admissible range: N >= 2, lambda below the bottom (N-1)^2/4 of the
// Laplacian spectrum, and p subcritical (p < (N+2)/(N-2) when N >= 3).
struct ModelParams {
  int dim = 3;
  double p = 3.0;
  double lambda = 0.0;

  // Throws std::invalid_argument with a human-readable reason.
  void validate() const;

  double spectrum_bottom() const { return 0.25 * (dim - 1.0) * (dim - 1.0); }

  double critical_exponent() const;

  // Positive root gap of mu^2 + (N-1) mu + lambda = 0, i.e. the spread
  // between the decaying and the slowly-varying far-field mode.
  double rate_gap() const {
    return std::sqrt((dim - 1.0) * (dim - 1.0) - 4.0 * lambda);
  }

  // Decay exponent c: the ground state behaves like e^{-c rho} at infinity.
  double decay_rate() const { return 0.5 * ((dim - 1.0) + rate_gap()); }
};

// acosh(1 + s) for s >= 0 without cancellation at small s.
inline double acosh1p(double s) {
  if (s < 0.0) s = 0.0;
  return std::log1p(s + std::sqrt(s * (s + 2.0)));
}

// Euclidean radius of the hyperbolic sphere of radius rho about the origin.
inline double ball_radius(double rho) { return std::tanh(0.5 * rho); }

// Inverse of ball_radius: hyperbolic distance to the origin of a point at
// Euclidean radius r < 1.
inline double radial_coord(double r) { return 2.0 * std::atanh(r); }

// Conformal factor of the ball model, g = conformal(x)^2 * euclidean.
inline double conformal_factor(double norm2) { return 2.0 / (1.0 - norm2); }

// Point of the open unit ball. Coordinates are Euclidean; the constructor
// rejects points on or outside the boundary sphere.
class BallPoint {
 public:
  explicit BallPoint(std::vector<double> coords);

  static BallPoint origin(int dim);

  // Point at signed hyperbolic distance s from the origin along the first
  // coordinate axis. |s| is capped near 28.3 by the resolution of double
  // precision at the boundary.
  static BallPoint on_axis(int dim, double s);

  int dim() const { return static_cast<int>(x_.size()); }
  const std::vector<double>& coords() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }

  double norm2() const { return norm2_; }
  double norm() const { return std::sqrt(norm2_); }

  // Hyperbolic distance to the origin.
  double rho() const { return radial_coord(norm()); }

 private:
  std::vector<double> x_;
  double norm2_ = 0.0;
};

// Hyperbolic distance between two points of the ball.
double hyp_distance(const BallPoint& a, const BallPoint& b);

// Hyperbolic translation (Moebius gyro-addition) taking the origin to b.
BallPoint translate(const BallPoint& b, const BallPoint& x);

// Inner product of the unit gradients of d(.,a) and d(.,b) at a common
// point, expressed through the side lengths d1 = d(x,a), d2 = d(x,b) and the
// separation dab = d(a,b). This is the cosine of the vertex angle at x.
double gradient_angle_cos(double d1, double d2, double dab);

// Distance from an axial-polar point (rho, theta measured from the positive
// axis) to a center sitting at signed axial position s. The two angle
// arguments are the precomputed versed quantities 2 sin^2(theta/2) and
// 2 cos^2(theta/2); every term of the expansion is nonnegative, so the
// result keeps full relative accuracy even when it is exponentially small.
double axial_distance(double rho, double s, double versin, double coversin);

// Surface measure of the unit (n-1)-sphere in R^n; n = 1 returns 2, the
// counting measure of the two endpoints, which unifies the N = 2 case of
// polar integration.
double unit_sphere_area(int n);

// Hyperbolic volume of the ball of radius radius in dimension dim.
double ball_volume(int dim, double radius);

}  // namespace hypb
