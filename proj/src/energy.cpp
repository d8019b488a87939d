#include "ssel/energy.hpp"

#include <algorithm>

namespace ssel {

double head_pressure(const SolutionSpec& spec, const Vec& point, const StencilConfig& cfg) {
  const DerivKit kit(spec, cfg);
  const Vec u = spec.eval.u(point);
  return 0.5 * kit.grad_d(point).frobenius2() + 0.5 * u.norm2() + spec.eval.p(point);
}

double boundary_flux_h(const SolutionSpec& spec, double tau, const Quadrature& quad,
                       const StencilConfig& cfg) {
  if (!(tau > 0)) throw Error(errc::validation, "boundary_flux_h: tau must be positive");
  const DerivKit kit(spec, cfg);
  auto integrand = [&](const Vec& x) {
    const Vec er = x / x.norm();
    const Vec u = spec.eval.u(x);
    const Vec du_dr = kit.grad_u(x) * er;
    const double H = 0.5 * kit.grad_d(x).frobenius2() + 0.5 * u.norm2() + spec.eval.p(x);
    return u.dot(du_dr) - H * u.dot(er);
  };
  return quad.integrate_radius(integrand, tau);
}

namespace {

double radial_gl_integral(double r, double R, int n_radial,
                          const std::function<double(double)>& shell) {
  std::vector<double> gx, gw;
  gauss_legendre(n_radial, gx, gw);
  std::vector<double> vals(gx.size());
  for (std::size_t i = 0; i < gx.size(); ++i) {
    const double rho = 0.5 * (R - r) * gx[i] + 0.5 * (R + r);
    vals[i] = 0.5 * (R - r) * gw[i] * shell(rho);
  }
  return pairwise_sum(vals);
}

}  // namespace

double dissipation(const SolutionSpec& spec, double r, double R, int n_radial,
                   const Quadrature& quad, const StencilConfig& cfg) {
  if (!(0 < r && r < R)) throw Error(errc::validation, "dissipation: need 0 < r < R");
  const DerivKit kit(spec, cfg);
  auto density = [&](const Vec& x) {
    const Vec d = spec.eval.d(x);
    const Mat gd = kit.grad_d(x);
    const Vec tension = kit.lap_d(x) + gd.frobenius2() * d;
    return kit.grad_u(x).frobenius2() + tension.norm2();
  };
  return radial_gl_integral(r, R, n_radial,
                            [&](double rho) { return quad.integrate_radius(density, rho); });
}

EnergyReport energy_balance(const SolutionSpec& spec, const std::vector<double>& radii,
                            int quad_resolution, const StencilConfig& cfg) {
  if (radii.size() < 2) throw Error(errc::validation, "energy_balance: need at least two radii");
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  if (!(rs.front() > 0)) throw Error(errc::validation, "energy_balance: radii must be positive");

  // the identity only holds for solutions; verify on a coarse grid first
  {
    GridSpec g = GridSpec::defaults(spec.dim);
    g.n_radial = 3;
    for (int& a : g.angular) a = std::max(4, a / 2);
    StencilConfig fd = cfg;
    double sup = momentum_residual(spec, g, fd).sup;
    sup = std::max(sup, continuity_residual(spec, g, fd).sup);
    sup = std::max(sup, director_residual(spec, g, fd).sup);
    if (sup > 1e-4)
      throw Error(errc::precondition, "energy_balance: spec fails verification (not a solution)");
  }

  const Quadrature quad = sphere_quadrature(spec.dim, quad_resolution);
  EnergyReport rep;
  rep.radii = rs;
  for (double t : rs) rep.h_values.push_back(boundary_flux_h(spec, t, quad, cfg));
  rep.dissipation = dissipation(spec, rs.front(), rs.back(), 64, quad, cfg);
  rep.h_gap = rep.h_values.back() - rep.h_values.front();
  rep.identity_gap = rep.dissipation - rep.h_gap;
  rep.h_monotone = true;
  const double scale = std::max(1e-12, std::abs(rep.h_values.back()));
  for (std::size_t i = 1; i < rep.h_values.size(); ++i)
    if (rep.h_values[i] < rep.h_values[i - 1] - 1e-8 * scale) rep.h_monotone = false;
  return rep;
}

double pointwise_energy_identity_residual(const SolutionSpec& spec, const Vec& point,
                                          const StencilConfig& cfg) {
  const DerivKit kit(spec, cfg);
  const Vec u = spec.eval.u(point);
  const Vec d = spec.eval.d(point);
  const Mat gd = kit.grad_d(point);
  const Vec tension = kit.lap_d(point) + gd.frobenius2() * d;

  const ScalarField half_u2 = [&](const Vec& y) { return 0.5 * spec.eval.u(y).norm2(); };
  const ScalarField head = [&](const Vec& y) {
    return 0.5 * kit.grad_d(y).frobenius2() + 0.5 * spec.eval.u(y).norm2() + spec.eval.p(y);
  };
  const double lap_half_u2 = fd_laplacian(half_u2, point, kit.stencil());
  const Vec grad_head = fd_gradient(head, point, kit.stencil());

  return kit.grad_u(point).frobenius2() + tension.norm2() - lap_half_u2 + u.dot(grad_head);
}

// ---------------------------------------------------------------------------
// Harmonic-map energy monotonicity.

namespace {

double shell_energy(const VectorField& d, double rho, const Quadrature& quad,
                    const StencilConfig& cfg) {
  // int_{|x|=rho} |grad d|^2 dsigma
  return quad.integrate_radius(
      [&](const Vec& x) { return fd_jacobian(d, x, cfg).frobenius2(); }, rho);
}

}  // namespace

double hm_energy_density(const VectorField& d, double r, int n, const Quadrature& quad,
                         const StencilConfig& cfg) {
  if (n < 3) throw Error(errc::validation, "hm_energy_density: needs n >= 3");
  if (!(r > 0)) throw Error(errc::validation, "hm_energy_density: r > 0");
  const double eps = 1e-6 * r;

  // power-law exponent of the shell integrand near the puncture
  const double s1 = shell_energy(d, eps, quad, cfg);
  const double s2 = shell_energy(d, 2 * eps, quad, cfg);
  double tail = 0;
  if (s1 > 1e-300) {
    const double sigma = std::log2(std::max(s2, 1e-300) / s1);
    if (sigma <= -1.0 + 1e-6)
      throw Error(errc::precondition,
                  "hm_energy_density: divergent energy (shells grow faster than r^{n-3})");
    tail = s1 * eps / (sigma + 1.0);
  }

  // log-radius panels from the cutoff out to r
  const int panels = 12, gl_n = 16;
  std::vector<double> gx, gw;
  gauss_legendre(gl_n, gx, gw);
  const double t0 = std::log(eps), t1 = std::log(r);
  double acc = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = t0 + (t1 - t0) * p / panels, hi = t0 + (t1 - t0) * (p + 1) / panels;
    for (int g = 0; g < gl_n; ++g) {
      const double t = 0.5 * (hi - lo) * gx[g] + 0.5 * (hi + lo);
      const double rho = std::exp(t);
      acc += 0.5 * (hi - lo) * gw[g] * rho * shell_energy(d, rho, quad, cfg);
    }
  }
  return std::pow(r, 2 - n) * (acc + tail);
}

MonotonicityReport hm_monotonicity_scan(const VectorField& d, const std::vector<double>& radii,
                                        int n, const Quadrature& quad, const StencilConfig& cfg) {
  MonotonicityReport rep;
  rep.radii = radii;
  for (double r : radii) rep.density.push_back(hm_energy_density(d, r, n, quad, cfg));

  rep.nondecreasing = true;
  double scale = 1e-12;
  for (double v : rep.density) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 1; i < rep.density.size(); ++i)
    if (rep.density[i] < rep.density[i - 1] - 1e-8 * scale) rep.nondecreasing = false;

  rep.slope_matches = true;
  for (double r : radii) {
    const double dr = 1e-3 * r;
    const double ep = hm_energy_density(d, r + dr, n, quad, cfg);
    const double em = hm_energy_density(d, r - dr, n, quad, cfg);
    const double slope = (ep - em) / (2 * dr);
    const double surface =
        2 * std::pow(r, 2 - n) *
        quad.integrate_radius(
            [&](const Vec& x) {
              const Vec er = x / x.norm();
              const Vec ddr = fd_jacobian(d, x, cfg) * er;
              return ddr.norm2();
            },
            r);
    rep.fd_slope.push_back(slope);
    rep.surface_term.push_back(surface);
    const double ref = std::max({std::abs(slope), std::abs(surface), 1e-10 * scale / r});
    if (std::abs(slope - surface) > 1e-4 * ref) rep.slope_matches = false;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Test fields for the stationarity identity.

namespace {

// smooth bump on (r0, r1): exp(1 - 1/(1-s^2)) with s the centered coordinate
struct Bump {
  double r0, r1;
  double eta(double r) const {
    const double s = (2 * r - (r0 + r1)) / (r1 - r0);
    if (std::abs(s) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s * s));
  }
  double eta_prime(double r) const {
    const double s = (2 * r - (r0 + r1)) / (r1 - r0);
    if (std::abs(s) >= 1.0) return 0.0;
    const double w = 1.0 - s * s;
    return eta(r) * (-2.0 * s / (w * w)) * (2.0 / (r1 - r0));
  }
};

}  // namespace

TestField radial_bump(int n, double r0, double r1) {
  const Bump b{r0, r1};
  TestField f;
  f.Y = [b](const Vec& x) { return b.eta(x.norm()) * x; };
  f.grad_Y = [b, n](const Vec& x) {
    const double r = x.norm();
    const double e = b.eta(r), ep = b.eta_prime(r);
    Mat J(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = ep * x[i] * x[j] / r + (i == j ? e : 0.0);
    return J;
  };
  return f;
}

TestField translation_bump(int n, int axis, double r0, double r1) {
  const Bump b{r0, r1};
  TestField f;
  f.Y = [b, n, axis](const Vec& x) { return b.eta(x.norm()) * Vec::unit(n, axis); };
  f.grad_Y = [b, n, axis](const Vec& x) {
    const double r = x.norm();
    const double ep = b.eta_prime(r);
    Mat J(n);
    for (int j = 0; j < n; ++j) J(axis, j) = ep * x[j] / r;
    return J;
  };
  return f;
}

TestField rotation_bump(int n, int ax1, int ax2, double r0, double r1) {
  const Bump b{r0, r1};
  TestField f;
  auto rot = [n, ax1, ax2](const Vec& x) {
    Vec v = Vec::zero(n);
    v[ax1] = -x[ax2];
    v[ax2] = x[ax1];
    return v;
  };
  f.Y = [b, rot](const Vec& x) { return b.eta(x.norm()) * rot(x); };
  f.grad_Y = [b, rot, n, ax1, ax2](const Vec& x) {
    const double r = x.norm();
    const double e = b.eta(r), ep = b.eta_prime(r);
    const Vec A = rot(x);
    Mat J(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = ep * A[i] * x[j] / r;
    J(ax1, ax2) += -e;
    J(ax2, ax1) += e;
    return J;
  };
  return f;
}

TestField modulated_translation_bump(int n, int axis, const Vec& w, double r0, double r1) {
  const Bump b{r0, r1};
  TestField f;
  f.Y = [b, n, axis, w](const Vec& x) {
    const double r = x.norm();
    const double mod = 1.0 + x.dot(w) / r;
    return (b.eta(r) * mod) * Vec::unit(n, axis);
  };
  f.grad_Y = [b, n, axis, w](const Vec& x) {
    const double r = x.norm();
    const Vec xh = x / r;
    const double e = b.eta(r), ep = b.eta_prime(r);
    const double mod = 1.0 + xh.dot(w);
    Mat J(n);
    for (int j = 0; j < n; ++j) {
      const double gmod_j = (w[j] - xh.dot(w) * xh[j]) / r;
      J(axis, j) = ep * xh[j] * mod + e * gmod_j;
    }
    return J;
  };
  return f;
}

std::vector<TestField> stationarity_battery(int n, double r0, double r1) {
  std::vector<TestField> fields;
  fields.push_back(radial_bump(n, r0, r1));
  for (int a = 0; a < n; ++a) fields.push_back(translation_bump(n, a, r0, r1));
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) fields.push_back(rotation_bump(n, a, b, r0, r1));
  for (int a = 0; a < n; ++a) {
    fields.push_back(modulated_translation_bump(n, a, Vec::unit(n, (a + 1) % n), r0, r1));
    fields.push_back(modulated_translation_bump(n, a, Vec::unit(n, (a + 2) % n), r0, r1));
  }
  return fields;
}

double stationarity_identity_check(const VectorField& d, int n, const TestField& Y, double r0,
                                   double r1, int n_radial, const Quadrature& quad,
                                   const StencilConfig& cfg) {
  auto integrand = [&](const Vec& x) {
    const Mat J = fd_jacobian(d, x, cfg);
    // sigma_ij = sum_a d_a,i d_a,j
    Mat sigma(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int a = 0; a < n; ++a) s += J(a, i) * J(a, j);
        sigma(i, j) = s;
      }
    const Mat gy = Y.grad_Y(x);
    double div_y = gy.trace();
    double contraction = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) contraction += sigma(i, j) * gy(i, j);
    return sigma.trace() * div_y - 2 * contraction;
  };
  return radial_gl_integral(r0, r1, n_radial,
                            [&](double rho) { return quad.integrate_radius(integrand, rho); });
}

nlohmann::json energy_to_json(const EnergyReport& r) {
  return {{"radii", r.radii},          {"h", r.h_values},
          {"dissipation", r.dissipation}, {"h_gap", r.h_gap},
          {"identity_gap", r.identity_gap}, {"h_monotone", r.h_monotone}};
}

}  // namespace ssel
