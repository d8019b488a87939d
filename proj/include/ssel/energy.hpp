#pragma once

// Energy bookkeeping for verified solutions: the generalized head pressure
// H = |grad d|^2/2 + |u|^2/2 + p, the boundary flux
//   h(tau) = int_{|x|=tau} ( <u, du/dr> - H <u, x/|x|> ) dsigma,
// the annulus dissipation int (|grad u|^2 + |Lap d + |grad d|^2 d|^2), whose
// increments equal h(R) - h(r) for exact solutions, the pointwise form of
// that identity, and the harmonic-map energy monotonicity machinery.

#include <nlohmann/json.hpp>

#include "ssel/residual.hpp"

namespace ssel {

struct EnergyReport {
  std::vector<double> radii;
  std::vector<double> h_values;
  double dissipation = 0;
  double h_gap = 0;        // h(R) - h(r) over the outermost pair
  double identity_gap = 0; // dissipation - h_gap
  bool h_monotone = false;
};

double head_pressure(const SolutionSpec& spec, const Vec& point, const StencilConfig& cfg = {});

double boundary_flux_h(const SolutionSpec& spec, double tau, const Quadrature& quad,
                       const StencilConfig& cfg = {});

double dissipation(const SolutionSpec& spec, double r, double R, int n_radial,
                   const Quadrature& quad, const StencilConfig& cfg = {});

// Requires the spec to verify as a solution first (residual sup < 1e-4 on a
// coarse grid); throws errc::precondition otherwise.
EnergyReport energy_balance(const SolutionSpec& spec, const std::vector<double>& radii,
                            int quad_resolution = 48, const StencilConfig& cfg = {});

// defect of  |grad u|^2 + |Lap d + |grad d|^2 d|^2 - Lap(|u|^2/2)
//            + u.grad(|grad d|^2/2 + |u|^2/2 + p)  at one point
double pointwise_energy_identity_residual(const SolutionSpec& spec, const Vec& point,
                                          const StencilConfig& cfg = {});

// r^{2-n} int_{B_r} |grad d|^2 with the ball integral taken from an inner
// cutoff r*1e-6 and a power-law tail fitted from the innermost shells;
// throws errc::precondition ("divergent energy") when the shell integrand
// grows too fast toward the origin.
double hm_energy_density(const VectorField& d, double r, int n, const Quadrature& quad,
                         const StencilConfig& cfg = {});

struct MonotonicityReport {
  std::vector<double> radii;
  std::vector<double> density;        // r^{2-n} int_{B_r} |grad d|^2
  std::vector<double> fd_slope;       // centered differences of the density
  std::vector<double> surface_term;   // 2 r^{2-n} int_{|x|=r} |dd/d|x||^2
  bool nondecreasing = false;
  bool slope_matches = false;         // fd_slope vs surface_term within 1e-4 relative
};
MonotonicityReport hm_monotonicity_scan(const VectorField& d, const std::vector<double>& radii,
                                        int n, const Quadrature& quad,
                                        const StencilConfig& cfg = {});

// Compactly supported test fields on the annulus (r0, r1), with analytic
// gradients.  The smooth bump eta vanishes to all orders at r0 and r1.
struct TestField {
  VectorField Y;
  std::function<Mat(const Vec&)> grad_Y;  // (i,j) -> dY_i/dx_j
};
TestField radial_bump(int n, double r0, double r1);
TestField translation_bump(int n, int axis, double r0, double r1);
TestField rotation_bump(int n, int ax1, int ax2, double r0, double r1);
// angularly modulated translation: Y = eta(r) (1 + x^.w) e_axis; these break
// the angular cancellations that make homogeneous maps invisible to the
// symmetric fields above
TestField modulated_translation_bump(int n, int axis, const Vec& w, double r0, double r1);

// the full battery used by tests and the acceptance suite
std::vector<TestField> stationarity_battery(int n, double r0, double r1);

// int ( |grad d|^2 div Y - 2 <d_i, d_j> dY^i/dx_j ); ~0 for stationary
// harmonic maps, nonzero for generic non-harmonic maps
double stationarity_identity_check(const VectorField& d, int n, const TestField& Y, double r0,
                                   double r1, int n_radial, const Quadrature& quad,
                                   const StencilConfig& cfg = {});

nlohmann::json energy_to_json(const EnergyReport& r);

}  // namespace ssel
