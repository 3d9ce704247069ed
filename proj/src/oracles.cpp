#include "hypb/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hypb/rng.hpp"

namespace hypb {

namespace {

// Thomas solve of a symmetric tridiagonal system (diag, off) x = b.
void tridiag_solve(const std::vector<double>& diag,
                   const std::vector<double>& off, std::vector<double>& b) {
  const size_t n = diag.size();
  std::vector<double> c(n, 0.0);
  c[0] = off[0] / diag[0];
  b[0] /= diag[0];
  for (size_t i = 1; i < n; ++i) {
    const double m = diag[i] - off[i - 1] * c[i - 1];
    if (i + 1 < n) c[i] = off[i] / m;
    b[i] = (b[i] - off[i - 1] * b[i - 1]) / m;
  }
  for (size_t i = n - 1; i-- > 0;) b[i] -= c[i] * b[i + 1];
}

}  // namespace

VariationalResult variational_ground_state(const ModelParams& params,
                                           double domain, double grid_step,
                                           int max_iter) {
  params.validate();
  if (!(domain > 4.0 && grid_step > 0.0 && grid_step < 0.5))
    throw std::invalid_argument("oracle grid badly sized");
  const int dim = params.dim;
  const double p = params.p;
  const double p1 = p + 1.0;
  const double lambda = params.lambda;
  const double h = grid_step;
  const size_t n = static_cast<size_t>(std::llround(domain / h));

  // free nodes i = 0..n-1 at rho = i h; Dirichlet zero at rho = n h
  std::vector<double> mu(n + 1), mu_half(n + 1);
  for (size_t i = 0; i <= n; ++i) {
    const double rho = h * static_cast<double>(i);
    mu[i] = std::pow(std::sinh(rho), dim - 1);
    mu_half[i] = std::pow(std::sinh(rho + 0.5 * h), dim - 1);
  }

  // mass weights (trapezoid) and stiffness tridiagonal of
  // v -> int v'^2 mu - lambda int v^2 mu
  std::vector<double> mass(n, 0.0);
  for (size_t i = 0; i < n; ++i) mass[i] = (i == 0 ? 0.5 : 1.0) * mu[i] * h;
  std::vector<double> k_diag(n, 0.0), k_off(n - 1, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? mu_half[i - 1] / h : 0.0;
    const double right = mu_half[i] / h;
    k_diag[i] = left + right - lambda * mass[i];
    if (i + 1 < n) k_off[i] = -right;
  }

  const double area = unit_sphere_area(dim);
  auto energy_parts = [&](const std::vector<double>& v, double& num,
                          double& den) {
    num = 0.0;
    den = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const double vn = i + 1 < n ? v[i + 1] : 0.0;
      const double dv = (vn - v[i]) / h;
      num += dv * dv * mu_half[i] * h;
      num -= lambda * v[i] * v[i] * mass[i];
      den += std::pow(v[i], p1) * mass[i];
    }
    num *= area;
    den *= area;
  };

  std::vector<double> v(n, 0.0);
  const double c = params.decay_rate();
  for (size_t i = 0; i < n; ++i)
    v[i] = std::exp(-c * h * static_cast<double>(i));

  double num = 0.0, den = 0.0;
  energy_parts(v, num, den);
  double J = num / std::pow(den, 2.0 / p1);

  // preconditioner: stiffness plus unit mass, kept SPD for lambda below the
  // spectral bottom
  std::vector<double> pre_diag(n), pre_off(n - 1);
  for (size_t i = 0; i < n; ++i) pre_diag[i] = k_diag[i] + mass[i] + 1e-12;
  for (size_t i = 0; i + 1 < n; ++i) pre_off[i] = k_off[i];

  VariationalResult out;
  out.grid_step = h;
  out.domain = domain;
  int it = 0;
  double change = 1.0;
  std::vector<double> grad(n), dir(n), trial(n);
  for (; it < max_iter && change > 1e-14; ++it) {
    // grad J = 2 [K v - (num/den) M v^p] / den^{2/(p+1)}; the common
    // positive factor is absorbed into the step size
    const double ratio = num / den;
    for (size_t i = 0; i < n; ++i) {
      double kv = k_diag[i] * v[i];
      if (i > 0) kv += k_off[i - 1] * v[i - 1];
      if (i + 1 < n) kv += k_off[i] * v[i + 1];
      grad[i] = kv - ratio * mass[i] * std::pow(v[i], p);
    }
    dir = grad;
    tridiag_solve(pre_diag, pre_off, dir);

    double step = 1.0;
    double J_new = J;
    for (int bt = 0; bt < 50; ++bt) {
      for (size_t i = 0; i < n; ++i)
        trial[i] = std::max(v[i] - step * dir[i], 0.0);
      double tn = 0.0, td = 0.0;
      energy_parts(trial, tn, td);
      if (td > 0.0) {
        const double Jt = tn / std::pow(td, 2.0 / p1);
        if (Jt < J) {
          v = trial;
          num = tn;
          den = td;
          J_new = Jt;
          break;
        }
      }
      step *= 0.5;
    }
    change = (J - J_new) / J;
    J = J_new;
    // renormalize to unit nonlinear mass for conditioning
    const double scale = std::pow(den, -1.0 / p1);
    for (size_t i = 0; i < n; ++i) v[i] *= scale;
    num *= scale * scale;
    den = 1.0;
  }

  energy_parts(v, num, den);
  out.level = num / std::pow(den, 2.0 / p1);
  out.theta = std::pow(num / den, 1.0 / (p - 1.0));
  out.w0 = out.theta * v[0];
  out.iterations = it;
  out.final_change = change;
  return out;
}

McResult mc_interaction(const RadialProfile& W, double separation,
                        std::uint64_t samples, std::uint64_t seed) {
  if (!(separation > 0.0))
    throw std::invalid_argument("separation must be positive");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const int dim = W.params().dim;
  const double p = W.params().p;
  const double D = separation;
  const double r_cut = 25.0;

  // two importance clusters in polar coordinates around each center, with
  // radial densities proportional to sinh^{N-1}(r) e^{-kappa r}
  const double kappa[2] = {2.0 * W.params().decay_rate(),
                           W.params().decay_rate()};
  const size_t table_n = 20000;
  std::vector<std::vector<double>> cdf(2, std::vector<double>(table_n + 1));
  std::vector<double> norm(2);
  const double dr = r_cut / static_cast<double>(table_n);
  for (int cl = 0; cl < 2; ++cl) {
    double acc = 0.0;
    cdf[cl][0] = 0.0;
    double prev = 0.0;
    for (size_t j = 1; j <= table_n; ++j) {
      const double r = dr * static_cast<double>(j);
      const double val =
          std::pow(std::sinh(r), dim - 1) * std::exp(-kappa[cl] * r);
      acc += 0.5 * (prev + val) * dr;
      cdf[cl][j] = acc;
      prev = val;
    }
    norm[cl] = acc;
    for (auto& x : cdf[cl]) x /= acc;
  }
  auto sample_radius = [&](int cl, double u) {
    const auto& table = cdf[cl];
    size_t lo = 0, hi = table_n;
    while (hi - lo > 1) {
      const size_t mid = (lo + hi) / 2;
      if (table[mid] <= u)
        lo = mid;
      else
        hi = mid;
    }
    const double span = table[hi] - table[lo];
    const double frac = span > 0.0 ? (u - table[lo]) / span : 0.0;
    return dr * (static_cast<double>(lo) + frac);
  };
  // density of a cluster sample with respect to hyperbolic volume; the
  // sinh^{N-1} factors of the radial law and the volume element cancel
  const double sphere = unit_sphere_area(dim);
  auto cluster_density = [&](int cl, double r) {
    if (r >= r_cut) return 0.0;
    return std::exp(-kappa[cl] * r) / (norm[cl] * sphere);
  };

  SplitMix64 rng{seed};
  double mean = 0.0, m2 = 0.0;
  const double cosh_d = std::cosh(D), sinh_d = std::sinh(D);
  for (std::uint64_t s = 0; s < samples; ++s) {
    const int cl = rng.uniform() < 0.5 ? 0 : 1;
    const double r = sample_radius(cl, rng.uniform());
    const double u = rng.uniform(-1.0, 1.0);
    // distance to the other center by the hyperbolic law of cosines
    const double other = acosh1p(
        std::max(cosh_d * std::cosh(r) - sinh_d * std::sinh(r) * u - 1.0, 0.0));
    const double r1 = cl == 0 ? r : other;
    const double r2 = cl == 0 ? other : r;
    const double f = std::exp(p * W.log_value(r1) + W.log_value(r2));
    const double density =
        0.5 * (cluster_density(0, r1) + cluster_density(1, r2));
    const double weight = f / density;
    const double delta = weight - mean;
    mean += delta / static_cast<double>(s + 1);
    m2 += delta * (weight - mean);
  }
  McResult out;
  out.value = mean;
  out.samples = samples;
  const double var = m2 / static_cast<double>(samples - 1);
  out.std_error = std::sqrt(var / static_cast<double>(samples));
  return out;
}

double refine_radial(const std::function<double(double)>& f, int dim,
                     QuadratureSpec spec, double rel_tol, int max_doublings) {
  double prev = radial_integrate(f, dim, spec).value;
  for (int k = 0; k < max_doublings; ++k) {
    spec.n_radial *= 2;
    const double next = radial_integrate(f, dim, spec).value;
    if (std::abs(next - prev) <= rel_tol * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

}  // namespace hypb
