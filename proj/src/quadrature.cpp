#include "hypb/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hypb {
namespace {

// 16-point Gauss-Legendre rule on [-1,1], positive half.
constexpr double kGlX[8] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[8] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

struct PanelNodes {
  std::vector<double> x;
  std::vector<double> w;
};

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

void add_panel(double a, double b, PanelNodes& out) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  for (int i = 7; i >= 0; --i) {
    out.x.push_back(c - h * kGlX[i]);
    out.w.push_back(h * kGlW[i]);
  }
  for (int i = 0; i < 8; ++i) {
    out.x.push_back(c + h * kGlX[i]);
    out.w.push_back(h * kGlW[i]);
  }
}

std::vector<double> dedupe_sorted(std::vector<double> v, double tol) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double t : v)
    if (out.empty() || t - out.back() > tol) out.push_back(t);
  return out;
}

// Composite panel boundaries on [0, rho_max]: uniform at the target density,
// denser near the pole, and (optionally) geometrically refined around each
// center projection down to the scale of the near-axis kink.
std::vector<double> radial_breaks(const QuadratureSpec& spec,
                                  std::span<const double> centers) {
  const int base_panels = std::max(4, spec.n_radial / 16);
  const double w = spec.rho_max / base_panels;
  std::vector<double> b;
  b.reserve(static_cast<std::size_t>(base_panels) + 16);
  for (int k = 0; k <= base_panels; ++k) b.push_back(k * w);
  b.push_back(0.125 * w);
  b.push_back(0.25 * w);
  b.push_back(0.5 * w);
  const double fine = std::max(1e-12, spec.angular_floor);
  for (double s : centers) {
    const double q = std::abs(s);
    if (q <= 0.0 || q >= spec.rho_max) continue;
    b.push_back(q);
    double h = 0.5 * w;
    while (h > fine) {
      if (q - h > 0.0) b.push_back(q - h);
      if (q + h < spec.rho_max) b.push_back(q + h);
      if (!spec.center_graded && h < 0.125 * w) break;
      h *= 0.5;
    }
  }
  return dedupe_sorted(std::move(b), 0.25 * fine);
}

// Angular panel boundaries on [0, pi] at a given radius. Peaks sit on the
// axis toward each center's side, with width ~ e^{-min(rho, |s|)}; panels
// shrink geometrically toward an end until that side's scale is resolved.
std::vector<double> angular_breaks(const QuadratureSpec& spec, double rho,
                                   std::span<const double> centers) {
  constexpr double kPi = 3.14159265358979323846;
  const int top = std::max(2, spec.n_angular / 16);
  const double tw = kPi / top;
  double smax_pos = 0.0;
  double smax_neg = 0.0;
  for (double s : centers) {
    if (s > 0.0) smax_pos = std::max(smax_pos, s);
    if (s < 0.0) smax_neg = std::max(smax_neg, -s);
  }
  std::vector<double> b;
  b.reserve(128);
  for (int k = 0; k <= top; ++k) b.push_back(k * tw);
  auto grade = [&](double smax, bool from_zero) {
    if (smax <= 0.0) return;
    const double scale = std::exp(-std::min(rho, smax));
    const double floor =
        std::min(0.25 * tw, std::max(1e-2 * scale, spec.angular_floor));
    for (double h = 0.5 * tw; h > floor; h *= 0.5)
      b.push_back(from_zero ? h : kPi - h);
  };
  grade(smax_pos, true);
  grade(smax_neg, false);
  return dedupe_sorted(std::move(b), 0.25 * spec.angular_floor);
}

struct Accum {
  double sum = 0.0;
  double comp = 0.0;  // Kahan compensation
  double last = 0.0;  // mass in the outermost radial window
  double prev = 0.0;  // mass in the window before it

  void add(double term) {
    double y = term - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
};

double window_tail(const Accum& a) {
  double lastm = std::abs(a.last);
  if (lastm == 0.0) return 0.0;
  double prevm = std::abs(a.prev);
  double r = prevm > 0.0 ? std::min(lastm / prevm, 0.9) : 0.5;
  return lastm * r / (1.0 - r);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rho_max > 0.0))
    throw std::invalid_argument("rho_max must be positive");
  if (n_radial < 4 || n_angular < 4)
    throw std::invalid_argument("quadrature node counts must be at least 4");
  if (rule != "gl16")
    throw std::invalid_argument("unknown radial rule: " + rule);
  if (!(angular_floor > 0.0))
    throw std::invalid_argument("angular_floor must be positive");
}

IntegralResult radial_integrate(const std::function<double(double)>& f,
                                int dim, const QuadratureSpec& spec) {
  spec.validate();
  if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
  const auto breaks = radial_breaks(spec, {});
  const double area = unit_sphere_area(dim);
  const double wbase = spec.rho_max / std::max(4, spec.n_radial / 16);
  Accum acc;
  PanelNodes nodes;
  for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
    nodes.x.clear();
    nodes.w.clear();
    add_panel(breaks[k], breaks[k + 1], nodes);
    double panel = 0.0;
    for (std::size_t i = 0; i < nodes.x.size(); ++i) {
      const double rho = nodes.x[i];
      const double g = f(rho) * ipow(std::sinh(rho), dim - 1);
      panel += nodes.w[i] * g;
    }
    if (!std::isfinite(panel))
      throw std::runtime_error("non-finite integrand near rho = " +
                               std::to_string(breaks[k]));
    panel *= area;
    acc.add(panel);
    const double mid = 0.5 * (breaks[k] + breaks[k + 1]);
    if (mid > spec.rho_max - wbase)
      acc.last += panel;
    else if (mid > spec.rho_max - 2.0 * wbase)
      acc.prev += panel;
  }
  return {acc.sum, window_tail(acc)};
}

std::vector<IntegralResult> axial_integrate_many(
    const AxialIntegrand& F, int n_out, std::span<const double> centers,
    int dim, const QuadratureSpec& spec) {
  spec.validate();
  if (dim < 2) throw std::invalid_argument("dimension must be at least 2");
  if (n_out <= 0) throw std::invalid_argument("need at least one output");

  const auto rbreaks = radial_breaks(spec, centers);
  const double ring = unit_sphere_area(dim - 1);
  const double wbase = spec.rho_max / std::max(4, spec.n_radial / 16);
  const std::size_t nc = centers.size();

  std::vector<Accum> acc(static_cast<std::size_t>(n_out));
  std::vector<double> out(static_cast<std::size_t>(n_out));
  std::vector<double> panel(static_cast<std::size_t>(n_out));
  std::vector<double> dist(nc);
  std::vector<double> sh2(nc);   // 2 sinh^2((rho - |s|)/2)
  std::vector<double> ss(nc);    // sinh(rho) sinh(|s|)
  AxialPoint pt;
  pt.dist = std::span<const double>(dist);

  PanelNodes rn, an;
  for (std::size_t k = 0; k + 1 < rbreaks.size(); ++k) {
    rn.x.clear();
    rn.w.clear();
    add_panel(rbreaks[k], rbreaks[k + 1], rn);
    std::fill(panel.begin(), panel.end(), 0.0);
    for (std::size_t i = 0; i < rn.x.size(); ++i) {
      const double rho = rn.x[i];
      const double sinh_rho = std::sinh(rho);
      const double radial_w = rn.w[i] * ipow(sinh_rho, dim - 1) * ring;
      for (std::size_t c = 0; c < nc; ++c) {
        const double a = std::abs(centers[c]);
        const double h = std::sinh(0.5 * (rho - a));
        sh2[c] = 2.0 * h * h;
        ss[c] = sinh_rho * std::sinh(a);
      }
      const auto abreaks = angular_breaks(spec, rho, centers);
      for (std::size_t m = 0; m + 1 < abreaks.size(); ++m) {
        an.x.clear();
        an.w.clear();
        add_panel(abreaks[m], abreaks[m + 1], an);
        for (std::size_t j = 0; j < an.x.size(); ++j) {
          const double theta = an.x[j];
          const double sh = std::sin(0.5 * theta);
          const double chh = std::cos(0.5 * theta);
          pt.rho = rho;
          pt.theta = theta;
          pt.versin = 2.0 * sh * sh;
          pt.coversin = 2.0 * chh * chh;
          pt.cos_theta = chh * chh - sh * sh;
          for (std::size_t c = 0; c < nc; ++c) {
            if (ss[c] == 0.0) {
              dist[c] = rho;
            } else {
              const double ang = centers[c] > 0.0 ? pt.versin : pt.coversin;
              dist[c] = acosh1p(sh2[c] + ss[c] * ang);
            }
          }
          const double sin_theta = 2.0 * sh * chh;
          const double wgt =
              radial_w * an.w[j] * (dim > 2 ? ipow(sin_theta, dim - 2) : 1.0);
          F(pt, out.data());
          for (int q = 0; q < n_out; ++q)
            panel[static_cast<std::size_t>(q)] +=
                wgt * out[static_cast<std::size_t>(q)];
        }
      }
    }
    const double mid = 0.5 * (rbreaks[k] + rbreaks[k + 1]);
    for (int q = 0; q < n_out; ++q) {
      auto qi = static_cast<std::size_t>(q);
      if (!std::isfinite(panel[qi]))
        throw std::runtime_error("non-finite integrand near rho = " +
                                 std::to_string(rbreaks[k]));
      acc[qi].add(panel[qi]);
      if (mid > spec.rho_max - wbase)
        acc[qi].last += panel[qi];
      else if (mid > spec.rho_max - 2.0 * wbase)
        acc[qi].prev += panel[qi];
    }
  }
  std::vector<IntegralResult> res(static_cast<std::size_t>(n_out));
  for (int q = 0; q < n_out; ++q) {
    auto qi = static_cast<std::size_t>(q);
    res[qi] = {acc[qi].sum, window_tail(acc[qi])};
  }
  return res;
}

IntegralResult axial_integrate(
    const std::function<double(const AxialPoint&)>& F,
    std::span<const double> centers, int dim, const QuadratureSpec& spec) {
  auto many = axial_integrate_many(
      [&F](const AxialPoint& p, double* out) { out[0] = F(p); }, 1, centers,
      dim, spec);
  return many[0];
}

IntegralResult biaxial_integrate(const std::function<double(double, double)>& F,
                                 const BallPoint& b1, const BallPoint& b2,
                                 int dim, const QuadratureSpec& spec) {
  const double sep = hyp_distance(b1, b2);
  if (sep < 1e-14)
    return radial_integrate([&F](double rho) { return F(rho, rho); }, dim,
                            spec);
  const double centers[2] = {0.0, sep};
  return axial_integrate(
      [&F](const AxialPoint& p) { return F(p.dist[0], p.dist[1]); }, centers,
      dim, spec);
}

}  // namespace hypb
