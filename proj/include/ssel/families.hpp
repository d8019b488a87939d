#pragma once

// Closed-form solution families of the steady simplified Ericksen-Leslie
// system on R^n \ {0}, packaged as immutable SolutionSpec values with
// analytic first/second derivatives.
//
// All two-dimensional families are self-similar decompositions
//   u = (f(th) e_r + v e_th)/r,  p = q(th)/r^2,  d = cos(xi) e_r + sin(xi) e_th
// with q(th) = 2 f(th) + C.  The balance of the radial momentum against the
// director stress fixes C = -((m+1)^2 + lambda)/2 where f'' + f^2 + 4f =
// lambda; for constant f = c this gives q = -((m+1)^2 + c^2)/2.  (The consistency
// of this constant against the direct term-by-term integral is reported by
// compute_C1; see that function.)

#include <nlohmann/json.hpp>
#include <optional>

#include "ssel/field.hpp"
#include "ssel/periodic_ode.hpp"

namespace ssel {

enum class Family {
  case_i,
  case_ii,
  case_iii,
  landau,
  hedgehog,
  constant_director,
  custom_profile,
};

std::string family_name(Family f);
Family family_from_name(const std::string& name);

// Evaluator bundle; the derivative members are null when no analytic form
// exists (forced-fd verification then falls back to stencils on u, p, d).
struct Evaluators {
  int dim = 0;
  VectorField u, d;
  ScalarField p;
  std::function<Mat(const Vec&)> grad_u;        // (i,j) -> du_i/dx_j
  std::function<Vec(const Vec&)> lap_u;
  std::function<Vec(const Vec&)> grad_p;
  std::function<Mat(const Vec&)> grad_d;        // (i,j) -> dd_i/dx_j
  std::function<Vec(const Vec&)> lap_d;
  std::function<Vec(const Vec&)> ericksen_div;  // (div(grad d ⊙ grad d))_i
  bool has_analytic() const { return static_cast<bool>(grad_u); }
};

struct SolutionSpec {
  Family family = Family::constant_director;
  int dim = 0;
  nlohmann::json params;  // family-specific record, exactly the serialized form
  std::optional<ProfileSolution> profile;
  Evaluators eval;
  double landau_certificate = 0;  // curl-compatibility sup of the recovered grad p
};

SolutionSpec make_case_i(double c, int m, double theta0);
SolutionSpec make_case_ii(double Phi, int k, int m, double theta1, double theta2,
                          const ShootingConfig& cfg = {});
SolutionSpec make_case_iii(double Psi, double mu, double theta3);
SolutionSpec make_landau(double a);  // a in (1, inf]; infinity gives u == 0
SolutionSpec make_hedgehog(int n);
SolutionSpec make_constant_director(int n, const Vec& d0);

// JSON form: {"family": tag, "dim": n, "params": {...}} with "profile"
// present iff family is case_ii or custom_profile.
nlohmann::json spec_to_json(const SolutionSpec& spec);
SolutionSpec spec_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Profile classification (the converse direction: samples -> family).

struct ProfileSamples {
  // uniform samples over [0, 2pi); xi may be wrapped mod 2pi
  std::vector<double> f, v, q, xi;
};

// sample the reduced profiles of a dim-2 spec at r = 1
ProfileSamples sample_profiles(const SolutionSpec& spec, int n_samples = 256);

struct ClassifyResult {
  Family family;
  nlohmann::json params;
};

// Decision tree over the reduced system residual: v == 0 and f constant ->
// case_i; v == 0 otherwise -> case_ii; v != 0 -> case_iii (requires f, v
// constant and xi' + 1 == 0).  Throws errc::validation ("unclassifiable")
// when the samples fail the reduced equations or match no branch.
ClassifyResult classify_profile(const ProfileSamples& samples);

}  // namespace ssel
