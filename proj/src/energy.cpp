#include "hypb/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace hypb {

namespace {

bool integer_power(double p, int& p_int) {
  const long long r = std::llround(p);
  if (r >= 2 && std::abs(p - static_cast<double>(r)) <= 1e-12) {
    p_int = static_cast<int>(r);
    return true;
  }
  return false;
}

std::vector<double> binomial_row(int n) {
  std::vector<double> row(static_cast<size_t>(n) + 1, 1.0);
  for (int k = 1; k <= n; ++k)
    row[static_cast<size_t>(k)] =
        row[static_cast<size_t>(k - 1)] * static_cast<double>(n - k + 1) /
        static_cast<double>(k);
  return row;
}

struct PairCross {
  double grad = 0.0;
  double mass = 0.0;
  double tail = 0.0;
};

// int Wu'(d1) Wv'(d2) cos(angle) and int Wu(d1) Wv(d2) for two centers at
// hyperbolic separation D; the integrals depend on the pair only through D,
// so the canonical axial placement {0, D} is exact.
PairCross pair_cross(const RadialProfile& Wu, const RadialProfile& Wv,
                     double D, const QuadratureSpec& spec) {
  PairCross out;
  const int dim = Wu.params().dim;
  if (D <= 1e-14) {
    IntegralResult g = radial_integrate(
        [&](double rho) { return Wu.derivative(rho) * Wv.derivative(rho); },
        dim, spec);
    IntegralResult m = radial_integrate(
        [&](double rho) { return Wu.value(rho) * Wv.value(rho); }, dim, spec);
    out.grad = g.value;
    out.mass = m.value;
    out.tail = std::max(std::abs(g.tail), std::abs(m.tail));
    return out;
  }
  const double centers[2] = {0.0, D};
  auto results = axial_integrate_many(
      [&](const AxialPoint& pt, double* out_vals) {
        const double d1 = pt.dist[0];
        const double d2 = pt.dist[1];
        const double cg = gradient_angle_cos(d1, d2, D);
        out_vals[0] = Wu.derivative(d1) * Wv.derivative(d2) * cg;
        out_vals[1] = Wu.value(d1) * Wv.value(d2);
      },
      2, centers, dim, spec);
  out.grad = results[0].value;
  out.mass = results[1].value;
  out.tail = std::max(std::abs(results[0].tail), std::abs(results[1].tail));
  return out;
}

double signed_axial_position(const BallPoint& b, double tol) {
  double perp2 = 0.0;
  for (int j = 1; j < b.dim(); ++j) perp2 += b[j] * b[j];
  if (perp2 > tol * tol) return std::numeric_limits<double>::quiet_NaN();
  const double rho = b.rho();
  return b[0] < 0.0 ? -rho : rho;
}

}  // namespace

CoefficientField CoefficientField::unit() {
  CoefficientField a;
  a.kind_ = Kind::Unit;
  return a;
}

CoefficientField CoefficientField::exp_defect(double C, double delta) {
  if (!(C > 0.0 && C < 1.0))
    throw std::invalid_argument(
        "defect amplitude must lie in (0,1), got " + std::to_string(C));
  if (!(delta > 0.0))
    throw std::invalid_argument("defect rate must be positive, got " +
                                std::to_string(delta));
  CoefficientField a;
  a.kind_ = Kind::ExpDefect;
  a.C_ = C;
  a.delta_ = delta;
  return a;
}

CoefficientField CoefficientField::radial_table(std::vector<double> grid,
                                                std::vector<double> values) {
  if (grid.size() != values.size() || grid.size() < 2)
    throw std::invalid_argument("coefficient table needs matching grids");
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i]))
      throw std::invalid_argument("coefficient table must be finite");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("coefficient grid must increase strictly");
    if (!(values[i] > 0.0))
      throw std::invalid_argument(
          "coefficient must stay positive; table value " +
          std::to_string(values[i]) + " at rho = " + std::to_string(grid[i]));
  }
  if (grid.front() < 0.0)
    throw std::invalid_argument("coefficient grid must start at rho >= 0");
  if (std::abs(values.back() - 1.0) > 1e-6)
    throw std::invalid_argument(
        "coefficient must approach 1 at the end of its table, got " +
        std::to_string(values.back()));
  CoefficientField a;
  a.kind_ = Kind::RadialTable;
  a.grid_ = std::move(grid);
  a.table_ = std::move(values);
  return a;
}

double CoefficientField::value(double rho) const {
  switch (kind_) {
    case Kind::Unit:
      return 1.0;
    case Kind::ExpDefect:
      return 1.0 - C_ * std::exp(-delta_ * rho);
    case Kind::RadialTable: {
      if (rho <= grid_.front()) return table_.front();
      if (rho >= grid_.back()) return 1.0;
      const auto it = std::upper_bound(grid_.begin(), grid_.end(), rho);
      const size_t i = static_cast<size_t>(it - grid_.begin());
      const double t = (rho - grid_[i - 1]) / (grid_[i] - grid_[i - 1]);
      return table_[i - 1] + t * (table_[i] - table_[i - 1]);
    }
  }
  return 1.0;
}

double CoefficientField::defect(double rho) const {
  if (kind_ == Kind::Unit) return 0.0;
  if (kind_ == Kind::ExpDefect) return C_ * std::exp(-delta_ * rho);
  return 1.0 - value(rho);
}

std::pair<double, double> CoefficientField::delta_window(
    const ModelParams& params, double K) {
  const double c = params.decay_rate();
  return {K * c + static_cast<double>(params.dim - 1), (params.p + 1.0) * c};
}

BubbleSum::BubbleSum(std::shared_ptr<const RadialProfile> profile,
                     std::vector<BubbleTerm> terms)
    : profile_(std::move(profile)), terms_(std::move(terms)) {
  if (!profile_) throw std::invalid_argument("bubble sum needs a profile");
  if (terms_.empty())
    throw std::invalid_argument("bubble sum needs at least one term");
  for (const auto& term : terms_) {
    if (term.center.dim() != profile_->params().dim)
      throw std::invalid_argument("bubble center dimension mismatch");
    if (!(term.coeff >= 0.0))
      throw std::invalid_argument("bubble coefficients must be nonnegative");
  }
}

double BubbleSum::value(const BallPoint& x) const {
  double sum = 0.0;
  for (const auto& term : terms_)
    sum += term.coeff * profile_->value(hyp_distance(x, term.center));
  return sum;
}

std::optional<std::vector<double>> BubbleSum::axial_positions(
    double tol) const {
  std::vector<double> s;
  s.reserve(terms_.size());
  for (const auto& term : terms_) {
    const double si = signed_axial_position(term.center, tol);
    if (!std::isfinite(si)) return std::nullopt;
    s.push_back(si);
  }
  return s;
}

BubbleSum BubbleSum::scaled(double factor) const {
  if (!(factor >= 0.0))
    throw std::invalid_argument("scaling factor must be nonnegative");
  std::vector<BubbleTerm> terms = terms_;
  for (auto& term : terms) term.coeff *= factor;
  return BubbleSum(profile_, std::move(terms));
}

namespace {

double hlambda_inner_ex(const BubbleSum& u, const BubbleSum& v, double lambda,
                        const QuadratureSpec& spec, double* tail_out,
                        bool grad_only) {
  double sum = 0.0;
  double tail = 0.0;
  for (const auto& tu : u.terms()) {
    for (const auto& tv : v.terms()) {
      const double cc = tu.coeff * tv.coeff;
      if (cc == 0.0) continue;
      const double D = hyp_distance(tu.center, tv.center);
      PairCross pc = pair_cross(u.profile(), v.profile(), D, spec);
      sum += cc * (grad_only ? pc.grad : pc.grad - lambda * pc.mass);
      tail += std::abs(cc) * pc.tail;
    }
  }
  if (tail_out) *tail_out = tail;
  return sum;
}

}  // namespace

double hlambda_inner(const BubbleSum& u, const BubbleSum& v,
                     const QuadratureSpec& spec) {
  const double lambda = u.profile().params().lambda;
  return hlambda_inner_ex(u, v, lambda, spec, nullptr, false);
}

double mass_inner(const BubbleSum& u, const BubbleSum& v,
                  const QuadratureSpec& spec) {
  double sum = 0.0;
  for (const auto& tu : u.terms()) {
    for (const auto& tv : v.terms()) {
      const double cc = tu.coeff * tv.coeff;
      if (cc == 0.0) continue;
      const double D = hyp_distance(tu.center, tv.center);
      sum += cc * pair_cross(u.profile(), v.profile(), D, spec).mass;
    }
  }
  return sum;
}

double interaction(const RadialProfile& W, const BallPoint& b1,
                   const BallPoint& b2, const QuadratureSpec& spec) {
  const int dim = W.params().dim;
  if (b1.dim() != dim || b2.dim() != dim)
    throw std::invalid_argument("interaction centers dimension mismatch");
  const double p = W.params().p;
  double s1 = signed_axial_position(b1, 1e-12);
  double s2 = signed_axial_position(b2, 1e-12);
  if (!std::isfinite(s1) || !std::isfinite(s2)) {
    s1 = 0.0;
    s2 = hyp_distance(b1, b2);
  }
  if (std::abs(s1 - s2) <= 1e-14) {
    return radial_integrate(
               [&](double rho) {
                 return std::exp((p + 1.0) * W.log_value(rho));
               },
               dim, spec)
        .value;
  }
  const double centers[2] = {s1, s2};
  auto res = axial_integrate_many(
      [&](const AxialPoint& pt, double* out) {
        out[0] = std::exp(p * W.log_value(pt.dist[0]) +
                          W.log_value(pt.dist[1]));
      },
      1, centers, dim, spec);
  return res[0].value;
}

double defect_integral(const BubbleSum& u, const CoefficientField& a,
                       const QuadratureSpec& spec) {
  if (a.is_unit()) return 0.0;
  const auto positions = u.axial_positions();
  if (!positions)
    throw std::invalid_argument(
        "defect integral needs centers collinear through the origin");
  const double p1 = u.profile().params().p + 1.0;
  const auto& terms = u.terms();
  const size_t n = terms.size();
  auto res = axial_integrate_many(
      [&](const AxialPoint& pt, double* out) {
        const double def = std::max(a.defect(pt.rho), 0.0);
        if (def == 0.0) {
          out[0] = 0.0;
          return;
        }
        double val = 0.0;
        for (size_t i = 0; i < n; ++i)
          val += terms[i].coeff * u.profile().value(pt.dist[i]);
        out[0] = def * std::pow(val, p1);
      },
      1, *positions, u.dim(), spec);
  return res[0].value;
}

namespace {

// sum_k binom(P1,k) t^k (1-t)^{P1-k} atom[k]
double binomial_combination(int P1, double t, const std::vector<double>& atom) {
  const auto binom = binomial_row(P1);
  const double s = 1.0 - t;
  std::vector<double> sp(static_cast<size_t>(P1) + 1, 1.0);
  for (int k = 1; k <= P1; ++k)
    sp[static_cast<size_t>(k)] = sp[static_cast<size_t>(k - 1)] * s;
  double sum = 0.0;
  double tp = 1.0;
  for (int k = 0; k <= P1; ++k) {
    const size_t ku = static_cast<size_t>(k);
    sum += binom[ku] * tp * sp[static_cast<size_t>(P1 - k)] * atom[ku];
    tp *= t;
  }
  return sum;
}

}  // namespace

double com_kernel(double rho) {
  if (rho < 1e-8) return 1.0;
  return std::tanh(0.5 * rho) / (0.5 * rho);
}

double TwoCenterAtoms::numerator(double t) const {
  const double s = 1.0 - t;
  return (t * t + s * s) * A_n + 2.0 * t * s * cross_inner;
}

double TwoCenterAtoms::denominator_a(double t) const {
  if (P1 < 2) throw std::logic_error("moment expansion needs integer power");
  return denominator_unit(t) - defect_of(t);
}

double TwoCenterAtoms::denominator_unit(double t) const {
  if (P1 < 2) throw std::logic_error("moment expansion needs integer power");
  return binomial_combination(P1, t, M);
}

double TwoCenterAtoms::defect_of(double t) const {
  if (P1 < 2) throw std::logic_error("moment expansion needs integer power");
  return binomial_combination(P1, t, Dk);
}

double TwoCenterAtoms::J_of(double t) const {
  const double den = denominator_a(t);
  if (!(den > 0.0))
    throw std::runtime_error("energy denominator not positive at t = " +
                             std::to_string(t));
  return numerator(t) / std::pow(den, 2.0 / static_cast<double>(P1));
}

double TwoCenterAtoms::J_inf_of(double t) const {
  const double den = denominator_unit(t);
  if (!(den > 0.0))
    throw std::runtime_error("energy denominator not positive at t = " +
                             std::to_string(t));
  return numerator(t) / std::pow(den, 2.0 / static_cast<double>(P1));
}

double TwoCenterAtoms::S1_ref() const {
  if (P1 < 2) throw std::logic_error("moment expansion needs integer power");
  return A_n / std::pow(M[static_cast<size_t>(P1)],
                        2.0 / static_cast<double>(P1));
}

double TwoCenterAtoms::m1_of(double t) const {
  if (P1 < 2 || G.empty())
    throw std::logic_error("center-of-mass atoms not computed");
  return std::tanh(0.5) * binomial_combination(P1, t, G) /
         denominator_unit(t);
}

TwoCenterAtoms two_center_atoms(const RadialProfile& W, double s1, double s2,
                                const CoefficientField& a,
                                const QuadratureSpec& spec, bool with_com) {
  TwoCenterAtoms atoms;
  atoms.s1 = s1;
  atoms.s2 = s2;
  const ModelParams& params = W.params();
  const int dim = params.dim;
  const double lambda = params.lambda;

  atoms.A_n =
      radial_integrate(
          [&](double rho) {
            const double wd = W.derivative(rho);
            const double wv = W.value(rho);
            return wd * wd - lambda * wv * wv;
          },
          dim, spec)
          .value;

  int p_int = 0;
  const bool expandable = integer_power(params.p, p_int);
  const int P1 = expandable ? p_int + 1 : 0;
  atoms.P1 = P1;

  const double D = std::abs(s1 - s2);
  const size_t n_mom = expandable ? static_cast<size_t>(P1) + 1 : 0;
  const bool com = with_com && expandable;
  const size_t n_out = (com ? 3 : 2) * n_mom + 2;
  const double centers[2] = {s1, s2};

  double cached_rho = -1.0;
  double cached_def = 0.0;
  double cached_com = 0.0;
  auto results = axial_integrate_many(
      [&](const AxialPoint& pt, double* out) {
        const double d1 = pt.dist[0];
        const double d2 = pt.dist[1];
        if (pt.rho != cached_rho) {
          cached_rho = pt.rho;
          cached_def = a.defect(pt.rho);
          if (com) cached_com = com_kernel(pt.rho);
        }
        const double gcos = com ? cached_com * pt.cos_theta : 0.0;
        size_t idx = 0;
        if (expandable) {
          const double e1 = std::exp(W.log_value(d1));
          const double e2 = std::exp(W.log_value(d2));
          double pow1 = 1.0;
          for (int k = 0; k <= P1; ++k) {
            // u1^k u2^{P1-k} assembled from iterated products
            double v = pow1;
            for (int j = 0; j < P1 - k; ++j) v *= e2;
            out[idx] = v;
            out[idx + n_mom] = cached_def * v;
            if (com) out[idx + 2 * n_mom] = gcos * v;
            ++idx;
            pow1 *= e1;
          }
          idx += com ? 2 * n_mom : n_mom;
        }
        const double cg = gradient_angle_cos(d1, d2, D);
        out[idx++] = W.derivative(d1) * W.derivative(d2) * cg;
        out[idx] = W.value(d1) * W.value(d2);
      },
      n_out, centers, dim, spec);

  if (expandable) {
    atoms.M.resize(n_mom);
    atoms.Dk.resize(n_mom);
    if (com) atoms.G.resize(n_mom);
    for (size_t k = 0; k < n_mom; ++k) {
      atoms.M[k] = results[k].value;
      atoms.Dk[k] = results[k + n_mom].value;
      if (com) atoms.G[k] = results[k + 2 * n_mom].value;
      atoms.tail = std::max(atoms.tail, std::abs(results[k].tail));
    }
  }
  const size_t gi = n_out - 2;
  atoms.cross_inner = results[gi].value - lambda * results[gi + 1].value;
  atoms.cross_mass = results[gi + 1].value;
  atoms.tail = std::max(atoms.tail, std::abs(results[gi].tail));
  return atoms;
}

EnergyReport evaluate_energy(const BubbleSum& u, const CoefficientField& a,
                             const QuadratureSpec& spec) {
  const ModelParams& params = u.profile().params();
  const double p1 = params.p + 1.0;
  const auto positions = u.axial_positions();
  int p_int = 0;
  const bool expandable = integer_power(params.p, p_int) && positions &&
                          u.terms().size() <= 2;

  EnergyReport report;
  if (expandable) {
    const double c1 = u.terms()[0].coeff;
    const double c2 = u.terms().size() > 1 ? u.terms()[1].coeff : 0.0;
    const double s1 = (*positions)[0];
    const double s2 = u.terms().size() > 1 ? (*positions)[1] : s1;
    TwoCenterAtoms atoms = two_center_atoms(u.profile(), s1, s2, a, spec);
    const int P1 = atoms.P1;
    report.norm_sq_lambda =
        (c1 * c1 + c2 * c2) * atoms.A_n + 2.0 * c1 * c2 * atoms.cross_inner;
    const auto binom = binomial_row(P1);
    double m_sum = 0.0, d_sum = 0.0;
    double cp1 = 1.0;
    std::vector<double> cp2(static_cast<size_t>(P1) + 1, 1.0);
    for (int k = 1; k <= P1; ++k)
      cp2[static_cast<size_t>(k)] = cp2[static_cast<size_t>(k - 1)] * c2;
    for (int k = 0; k <= P1; ++k) {
      const size_t ku = static_cast<size_t>(k);
      const double wgt = binom[ku] * cp1 * cp2[static_cast<size_t>(P1 - k)];
      m_sum += wgt * atoms.M[ku];
      d_sum += wgt * atoms.Dk[ku];
      cp1 *= c1;
    }
    report.nonlinear_unit = m_sum;
    report.nonlinear_a = m_sum - d_sum;
    report.defect = d_sum;
    report.tail_nonlinear = atoms.tail;
    report.tail_norm = atoms.tail;
  } else {
    if (!positions)
      throw std::invalid_argument(
          "energy evaluation needs centers collinear through the origin");
    double tail_norm = 0.0;
    report.norm_sq_lambda =
        hlambda_inner_ex(u, u, params.lambda, spec, &tail_norm, false);
    report.tail_norm = tail_norm;
    const auto& terms = u.terms();
    const size_t n = terms.size();
    auto res = axial_integrate_many(
        [&](const AxialPoint& pt, double* out) {
          double val = 0.0;
          for (size_t i = 0; i < n; ++i)
            val += terms[i].coeff * u.profile().value(pt.dist[i]);
          const double pw = std::pow(val, p1);
          const double av = a.value(pt.rho);
          out[0] = pw;
          out[1] = av * pw;
        },
        2, *positions, u.dim(), spec);
    report.nonlinear_unit = res[0].value;
    report.nonlinear_a = res[1].value;
    report.defect = res[0].value - res[1].value;
    report.tail_nonlinear = std::abs(res[0].tail);
  }

  if (!(report.nonlinear_unit > 0.0))
    throw std::invalid_argument("bubble sum must have positive mass");
  if (!(report.nonlinear_a > 0.0))
    throw std::runtime_error("weighted nonlinear term must stay positive");
  report.J = report.norm_sq_lambda / std::pow(report.nonlinear_a, 2.0 / p1);
  report.J_inf =
      report.norm_sq_lambda / std::pow(report.nonlinear_unit, 2.0 / p1);
  report.I = 0.5 * report.norm_sq_lambda - report.nonlinear_a / p1;
  return report;
}

NormA norm_A(const RadialProfile& W, const QuadratureSpec& spec) {
  const ModelParams& params = W.params();
  NormA out;
  out.A = radial_integrate(
              [&](double rho) {
                return std::exp((params.p + 1.0) * W.log_value(rho));
              },
              params.dim, spec)
              .value;
  out.norm_sq = radial_integrate(
                    [&](double rho) {
                      const double wd = W.derivative(rho);
                      const double wv = W.value(rho);
                      return wd * wd - params.lambda * wv * wv;
                    },
                    params.dim, spec)
                    .value;
  out.discrepancy = std::abs(out.norm_sq - out.A) / out.A;
  out.stale = out.discrepancy > 1e-4;
  return out;
}

EnergyLevels energy_levels(const RadialProfile& W, const QuadratureSpec& spec,
                           int m_max) {
  if (m_max < 1) throw std::invalid_argument("level count must be positive");
  const double p = W.params().p;
  const double expo = (p - 1.0) / (p + 1.0);
  EnergyLevels levels;
  levels.A = norm_A(W, spec).A;
  levels.S1 = std::pow(levels.A, expo);
  levels.S2 = std::pow(2.0, expo) * levels.S1;
  levels.Sm.resize(static_cast<size_t>(m_max));
  for (int m = 1; m <= m_max; ++m)
    levels.Sm[static_cast<size_t>(m - 1)] =
        std::pow(static_cast<double>(m), expo) * levels.S1;
  return levels;
}

double ps_level(double base_level, const std::vector<double>& bubble_levels) {
  double sum = base_level;
  for (double s : bubble_levels) sum += s;
  return sum;
}

double rayleigh_bubble_sum(const BubbleSum& u, const QuadratureSpec& spec) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& tu : u.terms()) {
    for (const auto& tv : u.terms()) {
      const double cc = tu.coeff * tv.coeff;
      if (cc == 0.0) continue;
      const double D = hyp_distance(tu.center, tv.center);
      PairCross pc = pair_cross(u.profile(), u.profile(), D, spec);
      num += cc * pc.grad;
      den += cc * pc.mass;
    }
  }
  if (!(den > 0.0))
    throw std::invalid_argument("Rayleigh quotient needs positive mass");
  return num / den;
}

double rayleigh_radial(const std::function<double(double)>& f,
                       const std::function<double(double)>& fprime, int dim,
                       const QuadratureSpec& spec) {
  const double num =
      radial_integrate([&](double rho) { const double g = fprime(rho);
                         return g * g; },
                       dim, spec)
          .value;
  const double den =
      radial_integrate([&](double rho) { const double g = f(rho);
                         return g * g; },
                       dim, spec)
          .value;
  if (!(den > 0.0))
    throw std::invalid_argument("Rayleigh quotient needs positive mass");
  return num / den;
}

}  // namespace hypb
