#include "hypb/minmax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hypb {

void PathConfig::validate() const {
  params.validate();
  if (!(R2 > 1.0))
    throw std::invalid_argument("boundary radius R2 must exceed 1");
  if (!(alpha > alpha_prime && alpha_prime > 1.0))
    throw std::invalid_argument(
        "path exponents must satisfy alpha > alpha_prime > 1");
  const double x2 = x2_or_default();
  if (!(x2 > 0.0 && x2 < R2))
    throw std::invalid_argument(
        "interior anchor must lie strictly between 0 and R2");
  if (boundary_samples < 2)
    throw std::invalid_argument("need at least two boundary samples");
  for (double t : t_grid)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("t grid must lie in [0,1]");
}

double PathConfig::x2_or_default() const {
  if (x2_rho >= 0.0) return x2_rho;
  return R2 - std::pow(R2, alpha_prime / alpha);
}

std::vector<double> PathConfig::t_grid_or_default() const {
  if (!t_grid.empty()) return t_grid;
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(0.02 * i);
  grid.back() = 1.0;
  return grid;
}

BallPoint center_of_mass(const BubbleSum& u, const QuadratureSpec& spec) {
  const auto positions = u.axial_positions();
  if (!positions)
    throw std::invalid_argument(
        "center of mass needs centers collinear through the origin");
  const double p1 = u.profile().params().p + 1.0;
  const auto& terms = u.terms();
  const size_t n = terms.size();
  auto res = axial_integrate_many(
      [&](const AxialPoint& pt, double* out) {
        double val = 0.0;
        for (size_t i = 0; i < n; ++i)
          val += terms[i].coeff * u.profile().value(pt.dist[i]);
        const double pw = std::pow(val, p1);
        out[0] = pw;
        out[1] = com_kernel(pt.rho) * pt.cos_theta * pw;
      },
      2, *positions, u.dim(), spec);
  if (!(res[0].value > 0.0))
    throw std::invalid_argument("center of mass needs positive mass");
  const double m1 = std::tanh(0.5) * res[1].value / res[0].value;
  std::vector<double> coords(static_cast<size_t>(u.dim()), 0.0);
  coords[0] = m1;
  return BallPoint(coords);
}

double mass_transport_coefficient() {
  double best = 0.0;
  auto ratio = [](double r) { return r / (2.0 * std::atanh(r)); };
  best = std::max(best, ratio(1e-9));
  for (int i = 1; i <= 999; ++i) best = std::max(best, ratio(0.001 * i));
  return best;
}

BubbleSum h_star(const BallPoint& x1, const BallPoint& x2, double t,
                 const std::shared_ptr<const RadialProfile>& W,
                 const QuadratureSpec& spec) {
  if (!(t >= 0.0 && t <= 1.0))
    throw std::invalid_argument("mixing parameter must lie in [0,1]");
  BubbleSum u(W, {{x1, t}, {x2, 1.0 - t}});
  const double nrm2 = hlambda_inner(u, u, spec);
  if (!(nrm2 > 0.0))
    throw std::runtime_error("degenerate normalization in the bubble path");
  return u.scaled(1.0 / std::sqrt(nrm2));
}

namespace {

struct BoundaryData {
  double J = 0.0;
  double m1 = 0.0;
};

// single bubble at signed axial position s, with the defect in place
BoundaryData boundary_bubble(const RadialProfile& W, double s,
                             const CoefficientField& a, double A_n,
                             const QuadratureSpec& spec) {
  const double p1 = W.params().p + 1.0;
  const double centers[1] = {s};
  auto res = axial_integrate_many(
      [&](const AxialPoint& pt, double* out) {
        const double pw = std::exp(p1 * W.log_value(pt.dist[0]));
        out[0] = pw;
        out[1] = a.defect(pt.rho) * pw;
        out[2] = com_kernel(pt.rho) * pt.cos_theta * pw;
      },
      3, centers, W.params().dim, spec);
  BoundaryData out;
  const double den = res[0].value - res[1].value;
  if (!(den > 0.0))
    throw std::runtime_error("boundary bubble lost its mass");
  out.J = A_n / std::pow(den, 2.0 / p1);
  out.m1 = std::tanh(0.5) * res[2].value / res[0].value;
  return out;
}

}  // namespace

MinmaxReport minmax_bracket(const PathConfig& cfg, const RadialProfile& W,
                            const QuadratureSpec& spec) {
  cfg.validate();
  const ModelParams& wp = W.params();
  if (wp.dim != cfg.params.dim || wp.p != cfg.params.p ||
      wp.lambda != cfg.params.lambda)
    throw std::invalid_argument("profile was solved for different parameters");

  const double expo = (cfg.params.p - 1.0) / (cfg.params.p + 1.0);
  const double x2 = cfg.x2_or_default();
  const auto t_grid = cfg.t_grid_or_default();

  const long long pr = std::llround(cfg.params.p);
  const bool expandable =
      pr >= 2 && std::abs(cfg.params.p - static_cast<double>(pr)) <= 1e-12;

  MinmaxReport report;
  double A_n = 0.0;
  if (expandable) {
    TwoCenterAtoms atoms =
        two_center_atoms(W, cfg.R2, x2, cfg.a, spec, /*with_com=*/true);
    A_n = atoms.A_n;
    report.S1 = atoms.S1_ref();
    report.S2 = std::pow(2.0, expo) * report.S1;
    for (double t : t_grid) {
      PathSample sample;
      sample.t = t;
      sample.J = atoms.J_of(t);
      sample.margin = report.S2 - sample.J;
      sample.m1 = atoms.m1_of(t);
      report.samples.push_back(sample);
    }
  } else {
    auto Wp = std::make_shared<const RadialProfile>(W);
    const BallPoint b1 = BallPoint::on_axis(cfg.params.dim, cfg.R2);
    const BallPoint b2 = BallPoint::on_axis(cfg.params.dim, x2);
    BubbleSum single(Wp, {{b1, 1.0}});
    EnergyReport base = evaluate_energy(single, CoefficientField::unit(), spec);
    A_n = base.norm_sq_lambda;
    report.S1 = base.J_inf;
    report.S2 = std::pow(2.0, expo) * report.S1;
    for (double t : t_grid) {
      BubbleSum u(Wp, {{b1, t}, {b2, 1.0 - t}});
      EnergyReport rep = evaluate_energy(u, cfg.a, spec);
      PathSample sample;
      sample.t = t;
      sample.J = rep.J;
      sample.margin = report.S2 - sample.J;
      sample.m1 = center_of_mass(u, spec)[0];
      report.samples.push_back(sample);
    }
  }

  double max_J = -std::numeric_limits<double>::infinity();
  double argmax = 0.0;
  for (const auto& sample : report.samples) {
    if (sample.J > max_J) {
      max_J = sample.J;
      argmax = sample.t;
    }
  }
  report.path_max_J = max_J;
  report.path_argmax_t = argmax;
  report.interior_max =
      argmax != t_grid.front() && argmax != t_grid.back();

  double b_min = std::numeric_limits<double>::infinity();
  double b_max = -std::numeric_limits<double>::infinity();
  bool have_pos = false, have_neg = false;
  for (int k = 0; k < cfg.boundary_samples; ++k) {
    const double s = (k % 2 == 0) ? cfg.R2 : -cfg.R2;
    BoundaryData bd = boundary_bubble(W, s, cfg.a, A_n, spec);
    b_min = std::min(b_min, bd.J);
    b_max = std::max(b_max, bd.J);
    if (k % 2 == 0 && !have_pos) {
      report.m_boundary_pos = bd.m1;
      have_pos = true;
    }
    if (k % 2 == 1 && !have_neg) {
      report.m_boundary_neg = bd.m1;
      have_neg = true;
    }
  }
  report.boundary_max_J = b_max;
  report.boundary_spread = (b_max - b_min) / b_max;
  report.sign_change =
      have_pos && have_neg && report.m_boundary_pos * report.m_boundary_neg < 0.0;
  report.bracket_ok =
      report.S1 < report.path_max_J && report.path_max_J < report.S2;
  return report;
}

}  // namespace hypb
