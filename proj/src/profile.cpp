#include "hypb/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hypb {
namespace {

struct HermiteBasis {
  double h00, h10, h01, h11;
};

HermiteBasis hermite_at(double t) {
  const double t2 = t * t;
  const double t3 = t2 * t;
  return {2 * t3 - 3 * t2 + 1, t3 - 2 * t2 + t, -2 * t3 + 3 * t2, t3 - t2};
}

HermiteBasis hermite_deriv_at(double t) {
  const double t2 = t * t;
  return {6 * t2 - 6 * t, 3 * t2 - 4 * t + 1, -6 * t2 + 6 * t, 3 * t2 - 2 * t};
}

double odd_power(double w, double p) {
  return std::copysign(std::pow(std::abs(w), p), w);
}

enum class Shot { TooLarge, TooSmall };

struct Shooter {
  int N;
  double p;
  double lambda;
  double rk_step;
  double sigma_mid;
  double gap;

  void rhs(double rho, double w, double v, double& dw, double& dv) const {
    const double coth = std::cosh(rho) / std::sinh(rho);
    dw = v;
    dv = -(N - 1) * coth * v - lambda * w - odd_power(w, p);
  }

  void rk4(double rho, double h, double& w, double& v) const {
    double k1w, k1v, k2w, k2v, k3w, k3v, k4w, k4v;
    rhs(rho, w, v, k1w, k1v);
    rhs(rho + 0.5 * h, w + 0.5 * h * k1w, v + 0.5 * h * k1v, k2w, k2v);
    rhs(rho + 0.5 * h, w + 0.5 * h * k2w, v + 0.5 * h * k2v, k3w, k3v);
    rhs(rho + h, w + h * k3w, v + h * k3v, k4w, k4v);
    w += h / 6.0 * (k1w + 2 * k2w + 2 * k3w + k4w);
    v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }

  // The coth pole inflates local truncation error like rho^{-5}; shrink the
  // substep near the origin so the error stays uniform along the ray.
  double substep(double rho) const {
    if (rho >= 0.64) return rk_step;
    if (rho >= 0.16) return 0.25 * rk_step;
    if (rho >= 0.04) return 0.0625 * rk_step;
    return 0.015625 * rk_step;
  }

  // Advance from a to b (one grid interval).
  void advance(double a, double b, double& w, double& v) const {
    const double h0 = substep(a);
    const long n = std::lround(std::ceil((b - a) / h0 - 1e-9));
    const double h = (b - a) / static_cast<double>(n);
    double rho = a;
    for (long i = 0; i < n; ++i) {
      rk4(rho, h, w, v);
      rho = a + (b - a) * static_cast<double>(i + 1) / static_cast<double>(n);
    }
  }

  // Start values at rho0 from the regular series about the pole,
  // w = s + a rho^2 + b rho^4, which removes the coth singularity.
  void series(double s, double rho0, double& w, double& v) const {
    const double sp1 = std::pow(s, p - 1.0);
    const double a = -s * (lambda + sp1) / (2.0 * N);
    const double b = -(2.0 * a * (N - 1) / 3.0 + a * (lambda + p * sp1)) /
                     (12.0 + 4.0 * (N - 1));
    w = s + a * rho0 * rho0 + b * rho0 * rho0 * rho0 * rho0;
    v = 2.0 * a * rho0 + 4.0 * b * rho0 * rho0 * rho0;
  }

  Shot classify(double s, double grid_step, double shoot_end) const {
    double w, v;
    series(s, grid_step, w, v);
    bool was_below = false;
    const long nodes = std::lround(shoot_end / grid_step);
    for (long i = 1; i < nodes; ++i) {
      const double a = grid_step * static_cast<double>(i);
      advance(a, a + grid_step, w, v);
      if (w <= 0.0 || w < 1e-280) return Shot::TooLarge;
      if (w > 10.0 * s + 10.0) return Shot::TooSmall;
      const double sigma = v / w;
      const double rho = a + grid_step;
      if (rho > 3.0 && sigma < sigma_mid - 0.25 * gap) was_below = true;
      if (was_below && sigma > sigma_mid) return Shot::TooSmall;
    }
    return (v / w > sigma_mid) ? Shot::TooSmall : Shot::TooLarge;
  }
};

}  // namespace

double RadialProfile::value(double rho) const {
  const double a = std::abs(rho);
  if (a >= grid_end_)
    return tail_amplitude_ * std::exp(-tail_exponent_ * a);
  const auto n = values_.size();
  auto i = std::min(static_cast<std::size_t>(a / step_), n - 2);
  const double t = (a - step_ * static_cast<double>(i)) / step_;
  const auto b = hermite_at(t);
  return b.h00 * values_[i] + b.h10 * step_ * derivs_[i] +
         b.h01 * values_[i + 1] + b.h11 * step_ * derivs_[i + 1];
}

double RadialProfile::derivative(double rho) const {
  const double a = std::abs(rho);
  if (a >= grid_end_)
    return -tail_exponent_ * tail_amplitude_ * std::exp(-tail_exponent_ * a);
  const auto n = values_.size();
  auto i = std::min(static_cast<std::size_t>(a / step_), n - 2);
  const double t = (a - step_ * static_cast<double>(i)) / step_;
  const auto b = hermite_deriv_at(t);
  return (b.h00 * values_[i] + b.h01 * values_[i + 1]) / step_ +
         b.h10 * derivs_[i] + b.h11 * derivs_[i + 1];
}

double RadialProfile::log_value(double rho) const {
  const double a = std::abs(rho);
  if (a >= grid_end_) return log_tail_amplitude_ - tail_exponent_ * a;
  return std::log(value(a));
}

RadialProfile RadialProfile::from_table(const ModelParams& params,
                                        std::vector<double> grid,
                                        std::vector<double> values,
                                        double tail_amplitude,
                                        double tail_exponent, bool strict) {
  params.validate();
  const auto n = grid.size();
  if (n < 5 || values.size() != n)
    throw std::invalid_argument("profile table needs >= 5 matching nodes");
  if (grid.front() != 0.0)
    throw std::invalid_argument("profile grid must start at 0");
  const double h = grid[1] - grid[0];
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (std::abs(grid[i + 1] - grid[i] - h) > 1e-9 * h)
      throw std::invalid_argument("profile grid must be uniform");
  if (!(tail_amplitude > 0.0) || !(tail_exponent > 0.0))
    throw std::invalid_argument("tail model must be positive and decaying");

  RadialProfile w;
  w.params_ = params;
  w.step_ = h;
  w.grid_end_ = grid.back();
  w.values_ = std::move(values);
  w.derivs_.assign(n, 0.0);
  for (std::size_t i = 2; i + 2 < n; ++i)
    w.derivs_[i] = (-w.values_[i + 2] + 8 * w.values_[i + 1] -
                    8 * w.values_[i - 1] + w.values_[i - 2]) /
                   (12 * h);
  w.derivs_[0] = (-3 * w.values_[0] + 4 * w.values_[1] - w.values_[2]) / (2 * h);
  w.derivs_[1] = (w.values_[2] - w.values_[0]) / (2 * h);
  w.derivs_[n - 2] = (w.values_[n - 1] - w.values_[n - 3]) / (2 * h);
  w.derivs_[n - 1] =
      (3 * w.values_[n - 1] - 4 * w.values_[n - 2] + w.values_[n - 3]) /
      (2 * h);
  w.tail_amplitude_ = tail_amplitude;
  w.tail_exponent_ = tail_exponent;
  w.log_tail_amplitude_ = std::log(tail_amplitude);
  if (strict) w.check_shape();
  return w;
}

void RadialProfile::finish_tail(double fit_window) {
  // Log-linear least squares over the outer window; the amplitude is then
  // rescaled so the tail matches the last grid value exactly.
  const double lo = grid_end_ - fit_window;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = grid_node(i);
    if (x < lo) continue;
    const double y = std::log(values_[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  const double mm = static_cast<double>(m);
  const double denom = mm * sxx - sx * sx;
  const double slope = (mm * sxy - sx * sy) / denom;
  const double icept = (sy - slope * sx) / mm;
  double ss = 0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double x = grid_node(i);
    if (x < lo) continue;
    const double r = std::log(values_[i]) - (icept + slope * x);
    ss += r * r;
  }
  diag_.tail_fit_rms = std::sqrt(ss / mm);
  tail_exponent_ = -slope;
  log_tail_amplitude_ = std::log(values_.back()) + tail_exponent_ * grid_end_;
  tail_amplitude_ = std::exp(log_tail_amplitude_);
}

void RadialProfile::check_shape() const {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0))
      throw std::runtime_error("profile not strictly positive");
    if (i > 0 && !(values_[i] < values_[i - 1]))
      throw std::runtime_error("profile not strictly decreasing");
  }
  if (std::abs(derivs_.front()) > 1e-6 * values_.front())
    throw std::runtime_error("profile derivative at the pole is not flat");
  const double c = params_.decay_rate();
  if (std::abs(tail_exponent_ - c) > 0.02 * c)
    throw std::runtime_error("tail exponent deviates from c by over 2%");
  const double seam = tail_amplitude_ * std::exp(-tail_exponent_ * grid_end_);
  if (std::abs(seam / values_.back() - 1.0) > 1e-6)
    throw std::runtime_error("tail model discontinuous at the grid end");
}

RadialProfile solve_ground_state(const ModelParams& params,
                                 const SolverOptions& opts) {
  params.validate();
  if (!(opts.rk_step > 0.0) || opts.rk_step > opts.grid_step)
    throw std::invalid_argument("rk_step must be positive and at most grid_step");

  const double gap = params.rate_gap();
  const double c = params.decay_rate();
  double grid_end = opts.grid_end > 0
                        ? opts.grid_end
                        : std::clamp(19.5 / gap, 8.0, 25.0);
  const auto n_nodes =
      static_cast<std::size_t>(std::round(grid_end / opts.grid_step));
  grid_end = opts.grid_step * static_cast<double>(n_nodes);
  double shoot_end =
      opts.shoot_end > 0
          ? opts.shoot_end
          : std::min(100.0, std::max(grid_end + 4.0,
                                     std::log(1.0 / opts.bisect_rel) / gap + 4.0));

  Shooter sh{params.dim, params.p, params.lambda,
             opts.rk_step, -0.5 * (params.dim - 1.0), gap};
  const double rho0 = opts.grid_step;

  // Bracket the critical height by doubling/halving.
  double lo = 0.0, hi = 0.0, s = 1.0;
  Shot first = sh.classify(s, rho0, shoot_end);
  if (first == Shot::TooLarge) {
    hi = s;
    for (int i = 0; i < opts.max_bracket_steps && lo == 0.0; ++i) {
      s *= 0.5;
      if (sh.classify(s, rho0, shoot_end) == Shot::TooSmall) lo = s;
      else hi = s;
    }
  } else {
    lo = s;
    for (int i = 0; i < opts.max_bracket_steps && hi == 0.0; ++i) {
      s *= 2.0;
      if (sh.classify(s, rho0, shoot_end) == Shot::TooLarge) hi = s;
      else lo = s;
    }
  }
  if (lo == 0.0 || hi == 0.0)
    throw std::runtime_error(
        "shooting bracket not found; last height tried " + std::to_string(s));

  int iters = 0;
  while (hi - lo > opts.bisect_rel * hi) {
    if (++iters > opts.max_bisect_steps)
      throw std::runtime_error("shooting bisection stalled at bracket [" +
                               std::to_string(lo) + ", " + std::to_string(hi) +
                               "]");
    const double mid = 0.5 * (lo + hi);
    if (sh.classify(mid, rho0, shoot_end) == Shot::TooLarge) hi = mid;
    else lo = mid;
  }

  // Final pass on the positive-side solution, storing value and derivative
  // at every grid node.
  RadialProfile prof;
  prof.params_ = params;
  prof.step_ = opts.grid_step;
  prof.grid_end_ = grid_end;
  prof.values_.assign(n_nodes + 1, 0.0);
  prof.derivs_.assign(n_nodes + 1, 0.0);
  prof.values_[0] = lo;
  prof.derivs_[0] = 0.0;
  {
    double w, v;
    sh.series(lo, rho0, w, v);
    prof.values_[1] = w;
    prof.derivs_[1] = v;
    for (std::size_t node = 2; node <= n_nodes; ++node) {
      sh.advance(prof.grid_node(node - 1), prof.grid_node(node), w, v);
      if (!(w > 0.0))
        throw std::runtime_error("ground-state pass lost positivity at rho = " +
                                 std::to_string(prof.grid_node(node)));
      prof.values_[node] = w;
      prof.derivs_[node] = v;
    }
  }

  prof.diag_.bracket_lo = lo;
  prof.diag_.bracket_hi = hi;
  prof.diag_.bisect_steps = iters;
  prof.diag_.shoot_end = shoot_end;
  prof.finish_tail(std::min(5.0, 0.5 * grid_end));

  // Interior residual of the stored table against the first-order system:
  // the stored derivative column carries w', so the equation reads
  // v' + (N-1) coth v + lambda w + w^p = 0 with v' by fourth-order
  // differences.
  const double h = opts.grid_step;
  double sup = 0.0;
  for (std::size_t i = 2; i + 2 <= n_nodes; ++i) {
    const double rho = prof.grid_node(i);
    const double dv =
        (-prof.derivs_[i + 2] + 8 * prof.derivs_[i + 1] -
         8 * prof.derivs_[i - 1] + prof.derivs_[i - 2]) /
        (12 * h);
    const double coth = std::cosh(rho) / std::sinh(rho);
    const double res = dv + (params.dim - 1) * coth * prof.derivs_[i] +
                       params.lambda * prof.values_[i] +
                       std::pow(prof.values_[i], params.p);
    sup = std::max(sup, std::abs(res));
  }
  prof.diag_.residual_sup = sup;
  prof.diag_.end_log_slope = prof.derivs_.back() / prof.values_.back();
  if (sup > opts.residual_tol)
    throw std::runtime_error("ground-state residual " + std::to_string(sup) +
                             " exceeds tolerance");
  if (std::abs(prof.diag_.end_log_slope + c) > opts.decay_tol)
    throw std::runtime_error("end log-slope " +
                             std::to_string(prof.diag_.end_log_slope) +
                             " is not within tolerance of -c");

  if (params.dim == 2) {
    const double thresh =
        2.0 * (params.p + 1.0) / ((params.p + 3.0) * (params.p + 3.0));
    if (params.lambda > thresh) {
      prof.diag_.uniqueness_caveat = true;
      prof.diag_.note =
          "N = 2 with lambda above 2(p+1)/(p+3)^2: the fast-decay profile "
          "may not be unique; reporting the branch found by shooting";
    }
  }
  prof.check_shape();
  return prof;
}

}  // namespace hypb
