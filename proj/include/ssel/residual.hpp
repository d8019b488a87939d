#pragma once

// Verification of a SolutionSpec against the steady system
//   -Lap u + u.grad u + grad p + div(grad d ⊙ grad d) = 0,   div u = 0,
//   Lap d + |grad d|^2 d - u.grad d = 0,   |d| = 1,
// the self-similar scaling law, the advected harmonic-map equation on the
// sphere, scaling-invariant smallness norms, and pointwise decay constants.
// Residual norms are reported as sup and RMS over the grid; thresholds key
// on sup.

#include <nlohmann/json.hpp>

#include "ssel/families.hpp"

namespace ssel {

enum class Equation { momentum, continuity, director, unit_length, scaling, advected_hm_sphere };
std::string equation_name(Equation eq);

struct EquationReport {
  Equation equation = Equation::momentum;
  double sup = 0;
  double rms = 0;
  Vec worst_point;
  GridSpec grid;
  DerivMode mode = DerivMode::analytic_preferred;
};

// Routes derivative requests to the spec's analytic evaluators or to finite
// differences, depending on the stencil mode and availability.
class DerivKit {
 public:
  DerivKit(const SolutionSpec& spec, const StencilConfig& cfg);

  Mat grad_u(const Vec& x) const;
  Vec lap_u(const Vec& x) const;
  Vec grad_p(const Vec& x) const;
  Mat grad_d(const Vec& x) const;
  Vec lap_d(const Vec& x) const;
  Vec ericksen_div(const Vec& x) const;
  double div_u(const Vec& x) const;

  DerivMode effective_mode() const { return analytic_ ? DerivMode::analytic_preferred : DerivMode::forced_fd; }
  const StencilConfig& stencil() const { return cfg_; }

 private:
  const SolutionSpec* spec_;
  StencilConfig cfg_;
  bool analytic_;
};

Vec momentum_residual_at(const SolutionSpec& spec, const DerivKit& kit, const Vec& x);

EquationReport momentum_residual(const SolutionSpec& spec, const GridSpec& grid,
                                 const StencilConfig& cfg);
EquationReport continuity_residual(const SolutionSpec& spec, const GridSpec& grid,
                                   const StencilConfig& cfg);
EquationReport director_residual(const SolutionSpec& spec, const GridSpec& grid,
                                 const StencilConfig& cfg);
EquationReport unit_length_check(const SolutionSpec& spec, const GridSpec& grid);
EquationReport scaling_check(const SolutionSpec& spec, const std::vector<double>& lambdas,
                             const GridSpec& grid);

struct SmallnessNorms {
  double M_u = 0;  // sup |x||u|
  double M_d = 0;  // sup |x||grad d|
  std::vector<double> radii;
  std::vector<double> per_sphere_u, per_sphere_d;
};
SmallnessNorms smallness_norms(const SolutionSpec& spec, const GridSpec& grid,
                               const StencilConfig& cfg = {});

// Pressure reconstruction from grad p = Lap u - u.grad u - div(grad d ⊙ grad d),
// integrated along the radial-then-great-circle path from base_point.  The
// additive gauge is fixed by the radial doubling integral, which makes the
// output exactly (-2)-homogeneous when the input field is.  The certificate
// is the sup over the grid of the antisymmetric part of the numerical
// Jacobian of grad p; it must stay below 1e-5 or the field is rejected.
struct PressureRecovery {
  ScalarField p;
  double certificate = 0;
};
PressureRecovery pressure_recovery(const VectorField& u, const VectorField& d, int dim,
                                   const Vec& base_point, const GridSpec& grid,
                                   const StencilConfig& cfg);
// same machinery on a readily available grad-p field
PressureRecovery pressure_recovery_from_gradient(const VectorField& grad_p, int dim,
                                                 const Vec& base_point, const GridSpec& grid,
                                                 const StencilConfig& cfg);

// Advected harmonic-map residual on S^{n-1} at r = 1, using the restriction
// identity for degree-0 homogeneous d; requires the spec to be self-similar.
EquationReport sphere_director_residual(const SolutionSpec& spec, int resolution);

struct DecayReport {
  std::vector<int> orders;
  std::vector<double> radii;
  // value[order_index][radius_index]: per-sphere sup of the scaled derivative
  std::vector<std::vector<double>> u_vals, p_vals, d_vals;
};
DecayReport decay_estimate_check(const SolutionSpec& spec, const std::vector<int>& orders,
                                 const std::vector<double>& radii,
                                 const StencilConfig& cfg = {});

// Full verification bundle used by the CLI: the four equation residuals plus
// scaling, smallness norms, and decay constants.
struct VerifyReport {
  std::vector<EquationReport> reports;
  SmallnessNorms smallness;
  DecayReport decay;
  double threshold = 0;
  bool pass = false;
};
VerifyReport verify_solution(const SolutionSpec& spec, const GridSpec& grid,
                             const StencilConfig& cfg, double threshold);

nlohmann::json report_to_json(const EquationReport& r);
nlohmann::json verify_to_json(const VerifyReport& v, const SolutionSpec& spec);

}  // namespace ssel
