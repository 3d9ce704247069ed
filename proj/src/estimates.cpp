#include "hypb/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <memory>
#include <stdexcept>

namespace hypb {

void LemmaSweepConfig::validate() const {
  params.validate();
  if (!(alpha > alpha_prime && alpha_prime > 1.0))
    throw std::invalid_argument(
        "sweep exponents must satisfy alpha > alpha_prime > 1");
  if (!(R > 1.0))
    throw std::invalid_argument("sweep scale R must exceed 1");
  if (center_rhos.empty() || separations.empty())
    throw std::invalid_argument("sweep needs center distances and separations");
  for (double rho : center_rhos)
    if (!(rho > 0.0))
      throw std::invalid_argument("center distances must be positive");
  for (double d : separations)
    if (!(d > 0.0))
      throw std::invalid_argument("separations must be positive");
  for (double t : t_grid)
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("t grid must lie in [0,1]");
  const double k_hi =
      params.p + 1.0 -
      static_cast<double>(params.dim - 1) / params.decay_rate();
  if (K != 0.0 && !(K > 0.0 && K < k_hi))
    throw std::invalid_argument("K must lie in (0, (p+1) - (N-1)/c)");
}

double LemmaSweepConfig::K_or_default() const {
  if (K != 0.0) return K;
  const double k_hi =
      params.p + 1.0 -
      static_cast<double>(params.dim - 1) / params.decay_rate();
  return 0.5 * k_hi;
}

std::vector<double> LemmaSweepConfig::t_grid_or_default() const {
  if (!t_grid.empty()) return t_grid;
  std::vector<double> grid;
  for (int i = 0; i <= 50; ++i) grid.push_back(0.02 * i);
  grid.back() = 1.0;
  return grid;
}

std::pair<double, double> LemmaSweepConfig::separation_window(
    double center_rho) const {
  return {std::pow(R, alpha_prime),
          std::pow(R, alpha_prime - alpha) * center_rho};
}

double convex_inequality_check(double a_val, double b_val, double p) {
  if (!(a_val >= 0.0 && b_val >= 0.0))
    throw std::invalid_argument("convex inequality needs nonnegative inputs");
  if (!(p > 1.0)) throw std::invalid_argument("exponent must exceed 1");
  const double p1 = p + 1.0;
  const double s = a_val + b_val;
  if (s == 0.0) return 0.0;
  return std::pow(s, p1) - std::pow(a_val, p1) - std::pow(b_val, p1) -
         p * (std::pow(a_val, p) * b_val + a_val * std::pow(b_val, p));
}

DecaySandwich decay_sandwich_check(const RadialProfile& W, double eps) {
  const double c = W.params().decay_rate();
  if (!(eps > 0.0 && eps < c))
    throw std::invalid_argument("sandwich width must lie in (0, c)");
  DecaySandwich out;
  out.eps = eps;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  const size_t n = W.values().size();
  for (size_t i = 0; i < n; ++i) {
    const double rho = W.grid_node(i);
    const double w = W.values()[i];
    lo = std::min(lo, w * std::exp((c + eps) * rho));
    hi = std::max(hi, w * std::exp((c - eps) * rho));
  }
  out.C1 = lo;
  out.C2 = hi;
  return out;
}

InteractionFit interaction_lower_bound_check(
    const RadialProfile& W, const std::vector<double>& separations, double eps,
    const QuadratureSpec& spec) {
  if (separations.size() < 2)
    throw std::invalid_argument("exponent fit needs at least two separations");
  for (double d : separations)
    if (!(d >= 4.0))
      throw std::invalid_argument(
          "interaction sweep needs separations >= 4, got " +
          std::to_string(d));
  const double c = W.params().decay_rate();
  if (!(eps > 0.0 && eps < c))
    throw std::invalid_argument("fit tolerance eps must lie in (0, c)");

  InteractionFit fit;
  fit.separations = separations;
  fit.eps = eps;
  const int dim = W.params().dim;
  for (double d : separations) {
    const double q = interaction(W, BallPoint::origin(dim),
                                 BallPoint::on_axis(dim, d), spec);
    fit.values.push_back(q);
    fit.scaled.push_back(q * std::exp((c + eps) * d));
  }

  // least-squares slope of log q against d
  const size_t n = separations.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (!(fit.values[i] > 0.0))
      throw std::runtime_error("interaction must be positive at d = " +
                               std::to_string(separations[i]));
    const double x = separations[i];
    const double y = std::log(fit.values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(n);
  fit.fitted_exponent = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  fit.scaled_min = *std::min_element(fit.scaled.begin(), fit.scaled.end());
  fit.positive_lower_bound = fit.scaled_min > 0.0;
  fit.exponent_in_range =
      fit.fitted_exponent >= -(c + eps) && fit.fitted_exponent <= -(c - eps);
  return fit;
}

namespace {

struct GeometryResult {
  std::vector<SweepRow> rows;
  SweepEndpoint endpoint;
  double S1 = 0.0;
  double S2 = 0.0;
};

GeometryResult sweep_geometry(const LemmaSweepConfig& cfg,
                              const RadialProfile& W, double rho_bar, double D,
                              const std::vector<double>& t_grid,
                              const QuadratureSpec& spec) {
  GeometryResult out;
  const double s_near = rho_bar;
  const double s_far = rho_bar + D;
  const auto window = cfg.separation_window(rho_bar);
  const bool in_window = rho_bar >= std::pow(cfg.R, cfg.alpha) &&
                         D >= window.first && D <= window.second;
  const double expo = (cfg.params.p - 1.0) / (cfg.params.p + 1.0);

  if (cfg.strict_regime && !in_window) {
    const std::string reason =
        "separation outside the admissible window [" +
        std::to_string(window.first) + ", " + std::to_string(window.second) +
        "] or center distance below R^alpha";
    for (double t : t_grid) {
      SweepRow row;
      row.t = t;
      row.separation = D;
      row.center_rhos = {s_far, s_near};
      row.in_window = false;
      row.skipped = true;
      row.skip_reason = reason;
      row.J_value = row.J_inf = row.S2 = row.margin = row.interaction =
          row.defect = row.defect_over_interaction =
              std::numeric_limits<double>::quiet_NaN();
      out.rows.push_back(std::move(row));
    }
    out.endpoint.separation = D;
    out.endpoint.center_rhos = {s_far, s_near};
    out.endpoint.J0_rel = out.endpoint.J1_rel =
        std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  int p_int = 0;
  const bool expandable = [&] {
    const long long r = std::llround(cfg.params.p);
    if (r >= 2 && std::abs(cfg.params.p - static_cast<double>(r)) <= 1e-12) {
      p_int = static_cast<int>(r);
      return true;
    }
    return false;
  }();

  double S1 = 0.0, S2 = 0.0;
  double q_pair = 0.0;
  TwoCenterAtoms atoms;
  std::shared_ptr<const RadialProfile> Wp;
  if (expandable) {
    atoms = two_center_atoms(W, s_far, s_near, cfg.a, spec);
    S1 = atoms.S1_ref();
    q_pair = atoms.M[static_cast<size_t>(atoms.P1 - 1)];
  } else {
    Wp = std::make_shared<const RadialProfile>(W);
    BubbleSum single(Wp, {{BallPoint::on_axis(cfg.params.dim, s_near), 1.0}});
    S1 = evaluate_energy(single, cfg.a, spec).J_inf;
    q_pair = interaction(W, BallPoint::on_axis(cfg.params.dim, s_far),
                         BallPoint::on_axis(cfg.params.dim, s_near), spec);
  }
  S2 = std::pow(2.0, expo) * S1;
  out.S1 = S1;
  out.S2 = S2;

  double max_J = -std::numeric_limits<double>::infinity();
  double argmax_t = 0.0;
  double J0 = 0.0, J1 = 0.0;
  for (double t : t_grid) {
    SweepRow row;
    row.t = t;
    row.separation = D;
    row.center_rhos = {s_far, s_near};
    row.in_window = in_window;
    row.S2 = S2;
    row.interaction = q_pair;
    if (expandable) {
      row.J_value = atoms.J_of(t);
      row.J_inf = atoms.J_inf_of(t);
      row.defect = atoms.defect_of(t);
    } else {
      BubbleSum u(Wp, {{BallPoint::on_axis(cfg.params.dim, s_far), t},
                       {BallPoint::on_axis(cfg.params.dim, s_near), 1.0 - t}});
      EnergyReport rep = evaluate_energy(u, cfg.a, spec);
      row.J_value = rep.J;
      row.J_inf = rep.J_inf;
      row.defect = rep.defect;
    }
    row.margin = S2 - row.J_value;
    row.defect_over_interaction =
        row.interaction > 0.0
            ? row.defect / row.interaction
            : std::numeric_limits<double>::quiet_NaN();
    if (row.J_value > max_J) {
      max_J = row.J_value;
      argmax_t = t;
    }
    if (t == t_grid.front()) J0 = row.J_value;
    if (t == t_grid.back()) J1 = row.J_value;
    out.rows.push_back(std::move(row));
  }

  out.endpoint.separation = D;
  out.endpoint.center_rhos = {s_far, s_near};
  out.endpoint.J0_rel = std::abs(J0 - S1) / S1;
  out.endpoint.J1_rel = std::abs(J1 - S1) / S1;
  out.endpoint.argmax_t = argmax_t;
  out.endpoint.max_J = max_J;
  return out;
}

}  // namespace

SweepReport key_lemma_sweep(const LemmaSweepConfig& cfg,
                            const RadialProfile& W, const QuadratureSpec& spec,
                            int threads) {
  cfg.validate();
  const ModelParams& wp = W.params();
  if (wp.dim != cfg.params.dim || wp.p != cfg.params.p ||
      wp.lambda != cfg.params.lambda)
    throw std::invalid_argument("profile was solved for different parameters");

  SweepReport report;
  const double K = cfg.K_or_default();
  report.delta_window = CoefficientField::delta_window(cfg.params, K);
  if (report.delta_window.first >= report.delta_window.second) {
    report.delta_in_window = false;
    report.warnings.push_back(
        "admissible defect-rate window is empty for K = " + std::to_string(K));
  } else if (cfg.a.kind() == CoefficientField::Kind::ExpDefect) {
    report.delta_in_window = cfg.a.delta() > report.delta_window.first &&
                             cfg.a.delta() < report.delta_window.second;
    if (!report.delta_in_window)
      report.warnings.push_back(
          "defect rate " + std::to_string(cfg.a.delta()) +
          " lies outside the admissible window (" +
          std::to_string(report.delta_window.first) + ", " +
          std::to_string(report.delta_window.second) + ")");
  }

  const auto t_grid = cfg.t_grid_or_default();
  std::vector<std::pair<double, double>> cells;
  for (double rho : cfg.center_rhos)
    for (double D : cfg.separations) cells.emplace_back(rho, D);

  std::vector<GeometryResult> results(cells.size());
  if (threads > 1 && cells.size() > 1) {
    std::vector<std::future<GeometryResult>> futures;
    futures.reserve(cells.size());
    for (const auto& cell : cells)
      futures.push_back(std::async(std::launch::async, [&, cell] {
        return sweep_geometry(cfg, W, cell.first, cell.second, t_grid, spec);
      }));
    for (size_t i = 0; i < futures.size(); ++i) results[i] = futures[i].get();
  } else {
    for (size_t i = 0; i < cells.size(); ++i)
      results[i] =
          sweep_geometry(cfg, W, cells[i].first, cells[i].second, t_grid, spec);
  }

  double min_margin = std::numeric_limits<double>::infinity();
  size_t outside = 0;
  for (auto& res : results) {
    for (auto& row : res.rows) {
      if (!row.skipped) {
        min_margin = std::min(min_margin, row.margin);
        if (!row.in_window) ++outside;
      }
      report.rows.push_back(std::move(row));
    }
    report.endpoints.push_back(res.endpoint);
    if (report.S1 == 0.0 && res.S1 > 0.0) {
      report.S1 = res.S1;
      report.S2 = res.S2;
    }
  }
  if (outside > 0)
    report.warnings.push_back(
        std::to_string(outside) +
        " rows evaluated outside the admissible separation window");
  report.min_margin =
      std::isfinite(min_margin) ? min_margin
                                : std::numeric_limits<double>::quiet_NaN();
  return report;
}

double t_ratio_bound(double p) {
  if (!(p > 1.0)) throw std::invalid_argument("exponent must exceed 1");
  return std::pow(2.0, (p - 1.0) / (p + 1.0));
}

std::vector<double> t_ratio_profile(double p,
                                    const std::vector<double>& t_grid) {
  if (!(p > 1.0)) throw std::invalid_argument("exponent must exceed 1");
  const double bound = t_ratio_bound(p);
  std::vector<double> phi;
  phi.reserve(t_grid.size());
  for (double t : t_grid) {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::invalid_argument("t grid must lie in [0,1]");
    const double s = 1.0 - t;
    const double num = t * t + s * s;
    const double den = std::pow(std::pow(t, p + 1.0) + std::pow(s, p + 1.0),
                                2.0 / (p + 1.0));
    const double value = num / den;
    if (value > bound * (1.0 + 1e-12))
      throw std::runtime_error("mixing profile exceeded its bound at t = " +
                               std::to_string(t));
    phi.push_back(value);
  }
  return phi;
}

}  // namespace hypb
