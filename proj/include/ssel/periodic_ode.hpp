#pragma once

// Periodic profiles f of  f'' + f^2 + 4f = lambda  with minimal period 2pi/k
// and prescribed circle mean (1/2pi) int f = Phi/2pi.  The substitution
// g = f + 2, E = lambda + 4 turns the equation into the planar Hamiltonian
// system g'' = E - g^2 with a center at g = +sqrt(E) and a saddle at
// g = -sqrt(E); closed orbits fill the band between them.

#include <optional>
#include <string>
#include <vector>

#include "ssel/field.hpp"

namespace ssel {

struct ShootingConfig {
  double rk_step = 1e-4 * 2 * M_PI;  // fixed integrator step in theta
  double newton_tol = 1e-12;
  int max_newton = 50;
  int fourier_N = 64;       // max orbit harmonics retained
  int samples = 1024;       // trajectory samples per period for the FFT

  void validate() const {
    if (!(rk_step > 0) || !(newton_tol > 0) || max_newton < 1 || fourier_N < 4 || samples < 16)
      throw Error(errc::validation, "invalid shooting config");
  }
};

// true iff 4 + Phi/pi <= k^2 (ties true)
bool existence_condition(double Phi, int k);

struct OrbitResult {
  double period = 0;
  double mean = 0;            // mean of g over one period
  double energy_drift = 0;    // relative Hamiltonian drift along the orbit
  std::vector<double> theta;  // sample abscissae (uniform over [0, period))
  std::vector<double> g;      // samples of g
};

// Integrate from the turning point (g0, g'=0).  g0 must lie strictly inside
// the closed-orbit band (-sqrt(E), 2 sqrt(E)); g0 = sqrt(E) returns the
// constant orbit with the linearisation period 2pi/(4E)^{1/4}.
OrbitResult integrate_orbit(double E, double g0, const ShootingConfig& cfg = {},
                            int n_samples = 0);

struct ProfileSolution {
  std::vector<double> fourier_cos;  // circle harmonics j = 0..N (multiples of k nonzero)
  std::vector<double> fourier_sin;  // ~0 in the phase-aligned frame; kept for the record
  double lambda = 0;                // f'' + f^2 + 4f = lambda
  double C1_ode = 0;                // ((m+1)^2 - lambda)/2 at m = 0
  double C1_paper_formula = 0;      // printed formula at m = 0
  double Phi = 0;
  int k = 1;
  double amplitude = 0;             // (max f - min f)/2
  double residual_sup = 0;          // certified sup |f'' + f^2 + 4f - lambda|
  double E = 0, g0 = 0;             // converged shooting unknowns
  bool degenerate = false;          // constant profile at the existence boundary

  double f(double theta) const;
  double fp(double theta) const;
  double fpp(double theta) const;
};

ProfileSolution solve_profile(double Phi, int k, const ShootingConfig& cfg = {});

struct C1Report {
  double C1_ode = 0;              // ((m+1)^2 - lambda)/2
  double C1_integral_direct = 0;  // from integrating -f'' - f^2 - 4f over (0,2pi)
  double C1_paper_printed = 0;    // -(1/4pi) int f^2 - 2 Phi/pi + (m+1)^2/2
};

C1Report compute_C1(const ProfileSolution& profile, int m);

struct ScanRow {
  double Phi = 0;
  int k = 1;
  bool exists = false;
  std::string solved;  // "true", "false", "degenerate", or "failed:<reason>"
  double E = 0, amplitude = 0, residual_sup = 0, C1_ode = 0, C1_integral = 0;
};

// Scan Phi = Phi_min + j*Phi_step over [Phi_min, Phi_max], k = 1..k_max.
// Boundary ties are classified exactly when the Phi grid is commensurate
// with pi (grid indices are compared in integer arithmetic).
std::vector<ScanRow> scan_existence(double Phi_min, double Phi_max, double Phi_step, int k_max,
                                    const ShootingConfig& cfg = {});

// CSV with header "Phi,k,exists,solved,E,amplitude,residual_sup,C1_ode,C1_integral".
std::string scan_to_csv(const std::vector<ScanRow>& rows);

}  // namespace ssel
