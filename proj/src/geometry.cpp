#include "hypb/geometry.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace hypb {

void ModelParams::validate() const {
  if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
  if (!(lambda < spectrum_bottom()))
    throw std::invalid_argument(
        "lambda must lie below the spectral bottom (N-1)^2/4 = " +
        std::to_string(spectrum_bottom()));
  if (!(p > 1.0)) throw std::invalid_argument("power p must exceed 1");
  if (dim >= 3 && !(p < critical_exponent()))
    throw std::invalid_argument(
        "power p must be below the critical exponent (N+2)/(N-2) = " +
        std::to_string(critical_exponent()));
}

double ModelParams::critical_exponent() const {
  if (dim <= 2) return std::numeric_limits<double>::infinity();
  return (dim + 2.0) / (dim - 2.0);
}

BallPoint::BallPoint(std::vector<double> coords) : x_(std::move(coords)) {
  if (x_.empty()) throw std::invalid_argument("point needs coordinates");
  for (double c : x_) norm2_ += c * c;
  if (!(norm2_ < 1.0))
    throw std::invalid_argument("point lies outside the open unit ball");
}

BallPoint BallPoint::origin(int dim) {
  return BallPoint(std::vector<double>(static_cast<std::size_t>(dim), 0.0));
}

BallPoint BallPoint::on_axis(int dim, double s) {
  std::vector<double> x(static_cast<std::size_t>(dim), 0.0);
  x[0] = (s >= 0.0 ? 1.0 : -1.0) * ball_radius(std::abs(s));
  return BallPoint(std::move(x));
}

double hyp_distance(const BallPoint& a, const BallPoint& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  double diff2 = 0.0;
  for (int i = 0; i < a.dim(); ++i) {
    double d = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)];
    diff2 += d * d;
  }
  double denom = (1.0 - a.norm2()) * (1.0 - b.norm2());
  return acosh1p(2.0 * diff2 / denom);
}

BallPoint translate(const BallPoint& b, const BallPoint& x) {
  if (b.dim() != x.dim()) throw std::invalid_argument("dimension mismatch");
  const double b2 = b.norm2();
  const double x2 = x.norm2();
  double bx = 0.0;
  for (int i = 0; i < b.dim(); ++i)
    bx += b[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
  const double denom = b2 * x2 + 2.0 * bx + 1.0;
  const double cx = (1.0 - b2) / denom;
  const double cb = (x2 + 2.0 * bx + 1.0) / denom;
  std::vector<double> y(static_cast<std::size_t>(b.dim()));
  double y2 = 0.0;
  for (int i = 0; i < b.dim(); ++i) {
    auto k = static_cast<std::size_t>(i);
    y[k] = cx * x[k] + cb * b[k];
    y2 += y[k] * y[k];
  }
  if (y2 >= 1.0) {
    // Roundoff at extreme radii; pull back just inside the boundary.
    double scale = (1.0 - 1e-15) / std::sqrt(y2);
    for (double& c : y) c *= scale;
  }
  return BallPoint(std::move(y));
}

double gradient_angle_cos(double d1, double d2, double dab) {
  if (dab <= 0.0) return 1.0;
  const double s1 = std::sinh(d1);
  const double s2 = std::sinh(d2);
  if (s1 == 0.0 || s2 == 0.0) return 1.0;
  double c = (std::cosh(d1) * std::cosh(d2) - std::cosh(dab)) / (s1 * s2);
  return std::clamp(c, -1.0, 1.0);
}

double axial_distance(double rho, double s, double versin, double coversin) {
  const double a = std::abs(s);
  if (a == 0.0) return rho;
  const double h = std::sinh(0.5 * (rho - a));
  const double angular = (s > 0.0 ? versin : coversin);
  return acosh1p(2.0 * h * h + std::sinh(rho) * std::sinh(a) * angular);
}

double unit_sphere_area(int n) {
  if (n <= 0) throw std::invalid_argument("sphere dimension must be positive");
  if (n == 1) return 2.0;
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double ball_volume(int dim, double radius) {
  if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
  if (radius < 0.0) throw std::invalid_argument("radius must be nonnegative");
  // I_k = int_0^R sinh^k, by the power-reduction recursion.
  const double ch = std::cosh(radius);
  const double sh = std::sinh(radius);
  double even = radius;        // I_0
  double odd = ch - 1.0;       // I_1
  double val = (dim - 1) % 2 == 0 ? even : odd;
  for (int k = 2; k <= dim - 1; ++k) {
    double& prev = (k % 2 == 0) ? even : odd;
    prev = (std::pow(sh, k - 1) * ch - (k - 1) * prev) / k;
    val = prev;
  }
  return unit_sphere_area(dim) * val;
}

}  // namespace hypb
