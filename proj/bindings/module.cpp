#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <utility>
#include <vector>

#include "hypb/cli.hpp"
#include "hypb/energy.hpp"
#include "hypb/estimates.hpp"
#include "hypb/geometry.hpp"
#include "hypb/minmax.hpp"
#include "hypb/oracles.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace py = pybind11;
using namespace hypb;

namespace {

using AxialTerms = std::vector<std::pair<double, double>>;

// Centers live on the first coordinate axis at signed distances; that is
// the configuration every estimate in the library is phrased for.
BubbleSum make_sum(const std::shared_ptr<const RadialProfile>& W,
                   const AxialTerms& terms) {
  std::vector<BubbleTerm> bubble_terms;
  bubble_terms.reserve(terms.size());
  for (const auto& [rho, coeff] : terms)
    bubble_terms.push_back(
        {BallPoint::on_axis(W->params().dim, rho), coeff});
  return BubbleSum(W, std::move(bubble_terms));
}

// None selects a = 1; a pair (amplitude, rate) selects 1 - C e^{-delta rho}.
CoefficientField coeff_arg(const py::object& a) {
  if (a.is_none()) return CoefficientField::unit();
  const auto pair = a.cast<std::pair<double, double>>();
  return CoefficientField::exp_defect(pair.first, pair.second);
}

py::dict report_dict(const EnergyReport& rep) {
  py::dict d;
  d["norm_sq_lambda"] = rep.norm_sq_lambda;
  d["nonlinear_a"] = rep.nonlinear_a;
  d["nonlinear_unit"] = rep.nonlinear_unit;
  d["defect"] = rep.defect;
  d["J"] = rep.J;
  d["J_inf"] = rep.J_inf;
  d["I"] = rep.I;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Ground-state bubbles on the hyperbolic ball: profiles, energy "
      "levels, interaction integrals, and the two-bubble level estimates.";

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](int dim, double p, double lam) {
             ModelParams params{dim, p, lam};
             params.validate();
             return params;
           }),
           py::arg("dim") = 3, py::arg("p") = 3.0, py::arg("lam") = 0.0)
      .def_readonly("dim", &ModelParams::dim)
      .def_readonly("p", &ModelParams::p)
      .def_readonly("lam", &ModelParams::lambda)
      .def_property_readonly("spectrum_bottom", &ModelParams::spectrum_bottom)
      .def_property_readonly("decay_rate", &ModelParams::decay_rate)
      .def("__repr__", [](const ModelParams& params) {
        return "ModelParams(dim=" + std::to_string(params.dim) +
               ", p=" + std::to_string(params.p) +
               ", lam=" + std::to_string(params.lambda) + ")";
      });

  py::class_<RadialProfile, std::shared_ptr<RadialProfile>>(m, "RadialProfile")
      .def_property_readonly("w0", &RadialProfile::w0)
      .def_property_readonly("grid_end", &RadialProfile::grid_end)
      .def_property_readonly("grid_step", &RadialProfile::grid_step)
      .def_property_readonly("tail_amplitude", &RadialProfile::tail_amplitude)
      .def_property_readonly("tail_exponent", &RadialProfile::tail_exponent)
      .def_property_readonly("params", &RadialProfile::params)
      .def_property_readonly("residual_sup",
                             [](const RadialProfile& W) {
                               return W.diagnostics().residual_sup;
                             })
      .def_property_readonly("uniqueness_caveat",
                             [](const RadialProfile& W) {
                               return W.diagnostics().uniqueness_caveat;
                             })
      .def("value",
           py::vectorize([](RadialProfile& W, double rho) {
             return W.value(rho);
           }),
           py::arg("rho"))
      .def("derivative",
           py::vectorize([](RadialProfile& W, double rho) {
             return W.derivative(rho);
           }),
           py::arg("rho"))
      .def("__repr__", [](const RadialProfile& W) {
        return "RadialProfile(w0=" + std::to_string(W.w0()) +
               ", tail_exponent=" + std::to_string(W.tail_exponent()) + ")";
      });

  m.def(
      "solve_ground_state",
      [](const ModelParams& params) {
        return std::make_shared<RadialProfile>(solve_ground_state(params));
      },
      py::arg("params") = ModelParams{},
      py::call_guard<py::gil_scoped_release>(),
      "Shooting solve of the radial ground-state profile.");

  m.def(
      "energy_levels",
      [](const std::shared_ptr<const RadialProfile>& W, int m_max) {
        const EnergyLevels levels = energy_levels(*W, QuadratureSpec{}, m_max);
        py::dict d;
        d["A"] = levels.A;
        d["S1"] = levels.S1;
        d["S2"] = levels.S2;
        d["Sm"] = levels.Sm;
        return d;
      },
      py::arg("profile"), py::arg("m_max") = 3,
      "Critical levels A, S1 = A^{(p-1)/(p+1)}, Sm = m^{(p-1)/(p+1)} S1.");

  m.def(
      "interaction",
      [](const std::shared_ptr<const RadialProfile>& W, double separation) {
        const int dim = W->params().dim;
        return interaction(*W, BallPoint::on_axis(dim, separation / 2.0),
                           BallPoint::on_axis(dim, -separation / 2.0),
                           QuadratureSpec{});
      },
      py::arg("profile"), py::arg("separation"),
      py::call_guard<py::gil_scoped_release>(),
      "Interaction integral of two translated bubbles at the given "
      "separation.");

  m.def(
      "mc_interaction",
      [](const std::shared_ptr<const RadialProfile>& W, double separation,
         std::uint64_t samples, std::uint64_t seed) {
        McResult res;
        {
          py::gil_scoped_release release;
          res = mc_interaction(*W, separation, samples, seed);
        }
        return py::make_tuple(res.value, res.std_error);
      },
      py::arg("profile"), py::arg("separation"),
      py::arg("samples") = 1'000'000, py::arg("seed") = 1,
      "Importance-sampled Monte Carlo estimate (value, std_error) of the "
      "interaction integral.");

  m.def(
      "energy_report",
      [](const std::shared_ptr<const RadialProfile>& W,
         const AxialTerms& terms, const py::object& coefficient) {
        const BubbleSum u = make_sum(W, terms);
        const CoefficientField a = coeff_arg(coefficient);
        py::gil_scoped_release release;
        const EnergyReport rep = evaluate_energy(u, a, QuadratureSpec{});
        py::gil_scoped_acquire acquire;
        return report_dict(rep);
      },
      py::arg("profile"), py::arg("terms"), py::arg("coefficient") = py::none(),
      "Energy functionals of a bubble superposition; terms are (rho, coeff) "
      "pairs on the first axis, coefficient is None or (amplitude, rate).");

  m.def(
      "center_of_mass",
      [](const std::shared_ptr<const RadialProfile>& W,
         const AxialTerms& terms) {
        const BubbleSum u = make_sum(W, terms);
        py::gil_scoped_release release;
        return center_of_mass(u, QuadratureSpec{})[0];
      },
      py::arg("profile"), py::arg("terms"),
      "First coordinate of the normalized center of mass of the "
      "superposition.");

  m.def(
      "lemma_sweep",
      [](const std::shared_ptr<const RadialProfile>& W,
         const std::vector<double>& center_rhos,
         const std::vector<double>& separations, const py::object& coefficient,
         double t_step, bool strict_regime, int threads) {
        LemmaSweepConfig cfg;
        cfg.params = W->params();
        cfg.a = coeff_arg(coefficient);
        cfg.center_rhos = center_rhos;
        cfg.separations = separations;
        cfg.t_grid = uniform_t_grid(t_step);
        cfg.strict_regime = strict_regime;
        py::gil_scoped_release release;
        const SweepReport report =
            key_lemma_sweep(cfg, *W, QuadratureSpec{}, threads);
        py::gil_scoped_acquire acquire;
        py::list rows;
        for (const SweepRow& row : report.rows) {
          py::dict d;
          d["t"] = row.t;
          d["separation"] = row.separation;
          d["center_rho"] = row.center_rhos.first;
          d["J"] = row.J_value;
          d["margin"] = row.margin;
          d["interaction"] = row.interaction;
          d["defect"] = row.defect;
          d["in_window"] = row.in_window;
          d["skipped"] = row.skipped;
          rows.append(std::move(d));
        }
        py::dict out;
        out["S1"] = report.S1;
        out["S2"] = report.S2;
        out["min_margin"] = report.min_margin;
        out["rows"] = std::move(rows);
        out["warnings"] = report.warnings;
        return out;
      },
      py::arg("profile"), py::arg("center_rhos"), py::arg("separations"),
      py::arg("coefficient") = py::none(), py::arg("t_step") = 0.02,
      py::arg("strict_regime") = false, py::arg("threads") = 1,
      "Two-bubble level margins S2 - J(t u1 + (1-t) u2) over the requested "
      "geometry grid.");

  m.def(
      "minmax_bracket",
      [](const std::shared_ptr<const RadialProfile>& W, double R2,
         double x2_rho, const py::object& coefficient, double t_step,
         int boundary_samples) {
        PathConfig cfg;
        cfg.params = W->params();
        cfg.a = coeff_arg(coefficient);
        cfg.R2 = R2;
        cfg.x2_rho = x2_rho;
        cfg.t_grid = uniform_t_grid(t_step);
        cfg.boundary_samples = boundary_samples;
        py::gil_scoped_release release;
        const MinmaxReport report = minmax_bracket(cfg, *W, QuadratureSpec{});
        py::gil_scoped_acquire acquire;
        py::list samples;
        for (const PathSample& s : report.samples)
          samples.append(py::make_tuple(s.t, s.J, s.margin, s.m1));
        py::dict out;
        out["S1"] = report.S1;
        out["S2"] = report.S2;
        out["path_max_J"] = report.path_max_J;
        out["path_argmax_t"] = report.path_argmax_t;
        out["bracket_ok"] = report.bracket_ok;
        out["interior_max"] = report.interior_max;
        out["sign_change"] = report.sign_change;
        out["boundary_max_J"] = report.boundary_max_J;
        out["boundary_spread"] = report.boundary_spread;
        out["samples"] = std::move(samples);
        return out;
      },
      py::arg("profile"), py::arg("R2") = 12.0, py::arg("x2_rho") = -1.0,
      py::arg("coefficient") = py::none(), py::arg("t_step") = 0.02,
      py::arg("boundary_samples") = 4,
      "Mountain-pass bracket S1 < max_t J(h*(t)) < S2 along the normalized "
      "two-bubble segment.");

  m.def("t_ratio_bound", &t_ratio_bound, py::arg("p"),
        "Supremum 2^{(p-1)/(p+1)} of the scalar mixing profile.");

  m.def(
      "mixing_profile",
      [](double p, const std::vector<double>& t_grid) {
        return t_ratio_profile(p, t_grid);
      },
      py::arg("p"), py::arg("t_grid"),
      "Scalar mixing profile phi(t) on the given grid.");

  m.def("ball_volume", &ball_volume, py::arg("dim"), py::arg("radius"),
        "Volume of the hyperbolic ball of the given geodesic radius.");

  m.attr("__version__") = "0.1.0";
}
