#pragma once

#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "hypb/geometry.hpp"
#include "hypb/profile.hpp"
#include "hypb/quadrature.hpp"

namespace hypb {

// Radial weight a(x) in front of the nonlinearity. Shipped families: the
// constant 1, the exponential defect a = 1 - C e^{-delta rho} (0 < C < 1,
// delta > 0, so a is positive, bounded, and approaches 1 at infinity), and
// a user table interpolated in rho with limit 1 beyond its last node.
class CoefficientField {
 public:
  enum class Kind { Unit, ExpDefect, RadialTable };

  static CoefficientField unit();
  static CoefficientField exp_defect(double C, double delta);
  static CoefficientField radial_table(std::vector<double> grid,
                                       std::vector<double> values);

  Kind kind() const { return kind_; }
  bool is_unit() const { return kind_ == Kind::Unit; }
  double C() const { return C_; }
  double delta() const { return delta_; }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& table() const { return table_; }

  double value(double rho) const;
  // 1 - a(rho); for the exponential family this is the positive part too.
  double defect(double rho) const;

  // Decay window (K c + N - 1, (p+1) c) inside which an exponential-defect
  // rate delta is steep enough for the two-bubble estimates but shallower
  // than the nonlinear decay; empty windows are reported, not rejected.
  static std::pair<double, double> delta_window(const ModelParams& params,
                                                double K);

 private:
  CoefficientField() = default;
  Kind kind_ = Kind::Unit;
  double C_ = 0.0;
  double delta_ = 1.0;
  std::vector<double> grid_;
  std::vector<double> table_;
};

struct BubbleTerm {
  BallPoint center;
  double coeff = 1.0;
};

// Nonnegative superposition of translates of one radial profile:
// u(x) = sum_i coeff_i W(d(x, center_i)).
class BubbleSum {
 public:
  BubbleSum(std::shared_ptr<const RadialProfile> profile,
            std::vector<BubbleTerm> terms);

  const RadialProfile& profile() const { return *profile_; }
  const std::shared_ptr<const RadialProfile>& profile_ptr() const {
    return profile_;
  }
  const std::vector<BubbleTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  int dim() const { return profile_->params().dim; }

  double value(const BallPoint& x) const;

  // Signed positions on the first coordinate axis when every center lies on
  // it; the axially symmetric quadrature reduction applies exactly then.
  std::optional<std::vector<double>> axial_positions(double tol = 1e-12) const;

  BubbleSum scaled(double factor) const;

 private:
  std::shared_ptr<const RadialProfile> profile_;
  std::vector<BubbleTerm> terms_;
};

struct EnergyReport {
  double norm_sq_lambda = 0.0;  // int(|grad u|^2 - lambda u^2)
  double nonlinear_a = 0.0;     // int a u^{p+1}
  double nonlinear_unit = 0.0;  // int u^{p+1}
  double defect = 0.0;          // int (1-a) u^{p+1} (signed)
  double J = 0.0;               // norm / nonlinear_a^{2/(p+1)}
  double J_inf = 0.0;           // norm / nonlinear_unit^{2/(p+1)}
  double I = 0.0;               // norm/2 - nonlinear_a/(p+1)
  double tail_norm = 0.0;       // truncation diagnostics
  double tail_nonlinear = 0.0;
};

struct EnergyLevels {
  double A = 0.0;
  double S1 = 0.0;
  double S2 = 0.0;
  std::vector<double> Sm;
};

struct NormA {
  double A = 0.0;             // int w^{p+1}
  double norm_sq = 0.0;       // int(|grad w|^2 - lambda w^2)
  double discrepancy = 0.0;   // |norm_sq - A| / A
  bool stale = false;         // discrepancy above 1e-4
};

// H_lambda inner product of two bubble sums sharing a profile, expanded
// over center pairs; each pair reduces to a two-center integral of
// W'(d1) W'(d2) cos(angle) - lambda W(d1) W(d2).
double hlambda_inner(const BubbleSum& u, const BubbleSum& v,
                     const QuadratureSpec& spec);

// L^2 pairing int u v, by the same pairwise reduction.
double mass_inner(const BubbleSum& u, const BubbleSum& v,
                  const QuadratureSpec& spec);

// int w(d(x,b1))^p w(d(x,b2)). Collinear centers keep their true signed
// axial positions (so swapped arguments exercise a genuinely different
// grid); other configurations reduce to positions {0, separation}.
double interaction(const RadialProfile& W, const BallPoint& b1,
                   const BallPoint& b2, const QuadratureSpec& spec);

// int max(1-a, 0) u^{p+1}; centers must be collinear through the origin.
double defect_integral(const BubbleSum& u, const CoefficientField& a,
                       const QuadratureSpec& spec);

EnergyReport evaluate_energy(const BubbleSum& u, const CoefficientField& a,
                             const QuadratureSpec& spec);

NormA norm_A(const RadialProfile& W, const QuadratureSpec& spec);

// S1 = A^{(p-1)/(p+1)}, Sm = m^{(p-1)/(p+1)} S1 for m = 1..m_max.
EnergyLevels energy_levels(const RadialProfile& W, const QuadratureSpec& spec,
                           int m_max = 3);

// Energy additivity bookkeeping of the splitting decomposition.
double ps_level(double base_level, const std::vector<double>& bubble_levels);

// Rayleigh quotient int |grad u|^2 / int u^2 for a bubble sum.
double rayleigh_bubble_sum(const BubbleSum& u, const QuadratureSpec& spec);

// Same for an explicit radial function given with its derivative.
double rayleigh_radial(const std::function<double(double)>& f,
                       const std::function<double(double)>& fprime, int dim,
                       const QuadratureSpec& spec);

// Shared two-center machinery: every moment int u1^k u2^{p+1-k} and the
// defect-weighted versions, plus the cross inner products, from one grid
// pass. The integer-power expansion makes J(t u1 + (1-t) u2) an exact
// polynomial combination of these, so level margins of order the
// interaction size survive the common-mode quadrature error.
struct TwoCenterAtoms {
  int P1 = 0;  // p+1 when p is an integer >= 2, else 0 (atoms unavailable)
  double s1 = 0.0, s2 = 0.0;
  double A_n = 0.0;         // self norm int(|grad w|^2 - lambda w^2)
  double cross_inner = 0.0; // <u1, u2>_{H_lambda}
  double cross_mass = 0.0;  // int W(d1) W(d2)
  std::vector<double> M;    // M[k] = int u1^k u2^{P1-k}
  std::vector<double> Dk;   // Dk[k] = int (1-a) u1^k u2^{P1-k}
  std::vector<double> G;    // int g(rho) cos(theta) u1^k u2^{P1-k} (optional)
  double tail = 0.0;        // worst truncation diagnostic across atoms

  double numerator(double t) const;
  double denominator_a(double t) const;
  double denominator_unit(double t) const;
  double defect_of(double t) const;
  double J_of(double t) const;
  double J_inf_of(double t) const;
  double S1_ref() const;  // single-bubble level from the same atoms
  // first center-of-mass coordinate of t u1 + (1-t) u2 (needs G atoms)
  double m1_of(double t) const;
};

// Radial kernel of the center-of-mass functional: |x|/(k d(x,0)) with
// k = 1/2, i.e. tanh(rho/2)/(rho/2), extended by 1 at the pole.
double com_kernel(double rho);

TwoCenterAtoms two_center_atoms(const RadialProfile& W, double s1, double s2,
                                const CoefficientField& a,
                                const QuadratureSpec& spec,
                                bool with_com = false);

}  // namespace hypb
