#include "ssel/residual.hpp"

#include <algorithm>

namespace ssel {

std::string equation_name(Equation eq) {
  switch (eq) {
    case Equation::momentum: return "momentum";
    case Equation::continuity: return "continuity";
    case Equation::director: return "director";
    case Equation::unit_length: return "unit_length";
    case Equation::scaling: return "scaling";
    case Equation::advected_hm_sphere: return "advected_hm_sphere";
  }
  return "?";
}

// ---------------------------------------------------------------------------

DerivKit::DerivKit(const SolutionSpec& spec, const StencilConfig& cfg)
    : spec_(&spec), cfg_(cfg) {
  analytic_ = cfg.mode == DerivMode::analytic_preferred && spec.eval.has_analytic();
}

Mat DerivKit::grad_u(const Vec& x) const {
  return analytic_ ? spec_->eval.grad_u(x) : fd_jacobian(spec_->eval.u, x, cfg_);
}
Vec DerivKit::lap_u(const Vec& x) const {
  return analytic_ ? spec_->eval.lap_u(x) : fd_vector_laplacian(spec_->eval.u, x, cfg_);
}
Vec DerivKit::grad_p(const Vec& x) const {
  return analytic_ ? spec_->eval.grad_p(x) : fd_gradient(spec_->eval.p, x, cfg_);
}
Mat DerivKit::grad_d(const Vec& x) const {
  return analytic_ ? spec_->eval.grad_d(x) : fd_jacobian(spec_->eval.d, x, cfg_);
}
Vec DerivKit::lap_d(const Vec& x) const {
  return analytic_ ? spec_->eval.lap_d(x) : fd_vector_laplacian(spec_->eval.d, x, cfg_);
}
double DerivKit::div_u(const Vec& x) const {
  if (analytic_) return spec_->eval.grad_u(x).trace();
  return fd_divergence(spec_->eval.u, x, cfg_);
}

Vec DerivKit::ericksen_div(const Vec& x) const {
  if (analytic_) return spec_->eval.ericksen_div(x);
  // sigma_ij = sum_a d_a,i d_a,j from the FD Jacobian, differentiated by an
  // outer stencil; kept independent of the harmonic-map identity so the
  // verifier stays valid on non-solutions
  const int n = x.dim();
  const double h = cfg_.relative_step * x.norm();
  auto sigma_col = [&](const Vec& y, int i, int j) {
    const Mat J = fd_jacobian(spec_->eval.d, y, cfg_);
    double s = 0;
    for (int a = 0; a < n; ++a) s += J(a, i) * J(a, j);
    return s;
  };
  Vec E(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int j = 0; j < n; ++j) {
      const Vec e = Vec::unit(n, j);
      if (cfg_.order == 2) {
        acc += (sigma_col(x + h * e, i, j) - sigma_col(x - h * e, i, j)) / (2 * h);
      } else {
        acc += (-sigma_col(x + 2 * h * e, i, j) + 8 * sigma_col(x + h * e, i, j) -
                8 * sigma_col(x - h * e, i, j) + sigma_col(x - 2 * h * e, i, j)) /
               (12 * h);
      }
    }
    E[i] = acc;
  }
  return E;
}

// ---------------------------------------------------------------------------

Vec momentum_residual_at(const SolutionSpec& spec, const DerivKit& kit, const Vec& x) {
  const Vec u = spec.eval.u(x);
  return -1.0 * kit.lap_u(x) + kit.grad_u(x) * u + kit.grad_p(x) + kit.ericksen_div(x);
}

namespace {

EquationReport reduce_report(Equation eq, const GridSpec& grid, DerivMode mode,
                             const std::vector<Vec>& pts, const std::vector<double>& vals) {
  EquationReport rep;
  rep.equation = eq;
  rep.grid = grid;
  rep.mode = mode;
  double sup = -1;
  std::size_t arg = 0;
  for (std::size_t i = 0; i < vals.size(); ++i)
    if (vals[i] > sup) {
      sup = vals[i];
      arg = i;
    }
  rep.sup = std::max(sup, 0.0);
  rep.worst_point = pts.empty() ? Vec() : pts[arg];
  std::vector<double> sq(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = vals[i] * vals[i];
  rep.rms = vals.empty() ? 0.0 : std::sqrt(pairwise_sum(sq) / double(vals.size()));
  return rep;
}

template <class F>
EquationReport grid_norm(Equation eq, const SolutionSpec& spec, const GridSpec& grid,
                         DerivMode mode, F&& value_at) {
  const std::vector<Vec> pts = annulus_grid(grid, spec.dim);
  std::vector<double> vals(pts.size());
  parallel_chunks(pts.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) vals[i] = value_at(pts[i]);
  });
  return reduce_report(eq, grid, mode, pts, vals);
}

}  // namespace

EquationReport momentum_residual(const SolutionSpec& spec, const GridSpec& grid,
                                 const StencilConfig& cfg) {
  const DerivKit kit(spec, cfg);
  return grid_norm(Equation::momentum, spec, grid, kit.effective_mode(), [&](const Vec& x) {
    return momentum_residual_at(spec, kit, x).norm();
  });
}

EquationReport continuity_residual(const SolutionSpec& spec, const GridSpec& grid,
                                   const StencilConfig& cfg) {
  const DerivKit kit(spec, cfg);
  return grid_norm(Equation::continuity, spec, grid, kit.effective_mode(),
                   [&](const Vec& x) { return std::abs(kit.div_u(x)); });
}

EquationReport director_residual(const SolutionSpec& spec, const GridSpec& grid,
                                 const StencilConfig& cfg) {
  const DerivKit kit(spec, cfg);
  return grid_norm(Equation::director, spec, grid, kit.effective_mode(), [&](const Vec& x) {
    const Vec d = spec.eval.d(x);
    const Vec u = spec.eval.u(x);
    const Mat gd = kit.grad_d(x);
    const Vec lap = kit.lap_d(x);
    const double gd2 = gd.frobenius2();
    Vec res = lap + gd2 * d - gd * u;  // (gd*u)_a = sum_j d_a,j u_j = (u.grad d)_a
    return res.norm();
  });
}

EquationReport unit_length_check(const SolutionSpec& spec, const GridSpec& grid) {
  return grid_norm(Equation::unit_length, spec, grid, DerivMode::analytic_preferred,
                   [&](const Vec& x) { return std::abs(spec.eval.d(x).norm() - 1.0); });
}

EquationReport scaling_check(const SolutionSpec& spec, const std::vector<double>& lambdas,
                             const GridSpec& grid) {
  for (double l : lambdas)
    if (!(l > 0)) throw Error(errc::validation, "scaling_check: lambda must be positive");
  return grid_norm(Equation::scaling, spec, grid, DerivMode::analytic_preferred,
                   [&](const Vec& x) {
                     double dev = 0;
                     const Vec u = spec.eval.u(x);
                     const double p = spec.eval.p(x);
                     const Vec d = spec.eval.d(x);
                     for (double l : lambdas) {
                       const Vec xl = l * x;
                       dev = std::max(dev, (l * spec.eval.u(xl) - u).norm());
                       dev = std::max(dev, std::abs(l * l * spec.eval.p(xl) - p));
                       dev = std::max(dev, (spec.eval.d(xl) - d).norm());
                     }
                     return dev;
                   });
}

// ---------------------------------------------------------------------------

SmallnessNorms smallness_norms(const SolutionSpec& spec, const GridSpec& grid,
                               const StencilConfig& cfg) {
  grid.validate(spec.dim);
  const DerivKit kit(spec, cfg);
  SmallnessNorms out;
  out.radii.resize(grid.n_radial);
  const double q = grid.r_max / grid.r_min;
  for (int i = 0; i < grid.n_radial; ++i)
    out.radii[i] = grid.r_min * std::pow(q, double(i) / (grid.n_radial - 1));

  const std::vector<Vec> pts = annulus_grid(grid, spec.dim);
  const std::size_t per_sphere = pts.size() / grid.n_radial;
  out.per_sphere_u.assign(grid.n_radial, 0.0);
  out.per_sphere_d.assign(grid.n_radial, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int shell = (int)(i / per_sphere);
    const double r = pts[i].norm();
    const double mu = r * spec.eval.u(pts[i]).norm();
    const double md = r * kit.grad_d(pts[i]).frobenius();
    out.per_sphere_u[shell] = std::max(out.per_sphere_u[shell], mu);
    out.per_sphere_d[shell] = std::max(out.per_sphere_d[shell], md);
    out.M_u = std::max(out.M_u, mu);
    out.M_d = std::max(out.M_d, md);
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// integral of F . dl along a straight or great-circle leg via composite GL
double line_integral(const VectorField& F, const std::function<Vec(double)>& path,
                     const std::function<Vec(double)>& tangent, int panels, int gl_n) {
  std::vector<double> gx, gw;
  gauss_legendre(gl_n, gx, gw);
  double acc = 0;
  for (int p = 0; p < panels; ++p) {
    const double lo = double(p) / panels, hi = double(p + 1) / panels;
    for (int g = 0; g < gl_n; ++g) {
      const double t = 0.5 * (hi - lo) * gx[g] + 0.5 * (hi + lo);
      acc += 0.5 * (hi - lo) * gw[g] * F(path(t)).dot(tangent(t));
    }
  }
  return acc;
}

}  // namespace

PressureRecovery pressure_recovery_from_gradient(const VectorField& grad_p, int dim,
                                                 const Vec& base_point, const GridSpec& grid,
                                                 const StencilConfig& cfg) {
  grid.validate(dim);
  // curl-compatibility certificate over the grid
  double cert = 0;
  {
    const std::vector<Vec> pts = annulus_grid(grid, dim);
    std::vector<double> vals(pts.size());
    parallel_chunks(pts.size(), [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) {
        const Mat J = fd_jacobian(grad_p, pts[i], cfg);
        double c = 0;
        for (int a = 0; a < dim; ++a)
          for (int b2 = a + 1; b2 < dim; ++b2) c = std::max(c, std::abs(J(a, b2) - J(b2, a)));
        vals[i] = c;
      }
    });
    for (double v : vals) cert = std::max(cert, v);
  }
  if (cert > 1e-5)
    throw Error(errc::precondition,
                "pressure_recovery: incompatible field (curl certificate above 1e-5)");

  const double rb = base_point.norm();
  const Vec wb = base_point / rb;

  // gauge: radial doubling integral; exact for degree -2 homogeneous pressure
  const double I2 = line_integral(
      grad_p, [&](double t) { return (rb + t * rb) * wb; }, [&](double) { return rb * wb; }, 8,
      16);
  const double p_base = -(4.0 / 3.0) * I2;

  auto p_eval = [grad_p, base_point, p_base, rb, wb, dim](const Vec& x) {
    const double rx = x.norm();
    const Vec wx = x / rx;
    // radial leg from (rb, wb) to (rx, wb)
    double val = p_base;
    if (rx != rb) {
      val += line_integral(
          grad_p, [&](double t) { return (rb + t * (rx - rb)) * wb; },
          [&](double) { return (rx - rb) * wb; }, 6, 16);
    }
    // great-circle leg from wb to wx at radius rx
    const double c = std::clamp(wb.dot(wx), -1.0, 1.0);
    const double ang = std::acos(c);
    if (ang > 1e-15) {
      Vec t0 = wx - c * wb;
      const double tn = t0.norm();
      if (tn < 1e-12) {
        // nearly antipodal: walk through an orthogonal waypoint
        Vec aux = Vec::unit(dim, 0);
        if (std::abs(wb.dot(aux)) > 0.9) aux = Vec::unit(dim, 1);
        Vec mid = (aux - wb.dot(aux) * wb).normalized();
        auto leg = [&](const Vec& from, const Vec& to) {
          const double cc = std::clamp(from.dot(to), -1.0, 1.0);
          const double a2 = std::acos(cc);
          Vec tt = (to - cc * from).normalized();
          return line_integral(
              grad_p,
              [&](double t) { return rx * (std::cos(a2 * t) * from + std::sin(a2 * t) * tt); },
              [&](double t) {
                return rx * a2 * (-std::sin(a2 * t) * from + std::cos(a2 * t) * tt);
              },
              8, 16);
        };
        return val + leg(wb, mid) + leg(mid, wx);
      }
      t0 = t0 / tn;
      val += line_integral(
          grad_p,
          [&](double t) { return rx * (std::cos(ang * t) * wb + std::sin(ang * t) * t0); },
          [&](double t) {
            return rx * ang * (-std::sin(ang * t) * wb + std::cos(ang * t) * t0);
          },
          8, 16);
    }
    return val;
  };

  PressureRecovery out;
  out.certificate = cert;
  out.p = p_eval;
  return out;
}

PressureRecovery pressure_recovery(const VectorField& u, const VectorField& d, int dim,
                                   const Vec& base_point, const GridSpec& grid,
                                   const StencilConfig& cfg) {
  // grad p = Lap u - u.grad u - div(grad d ⊙ grad d), all by stencils on the
  // provided evaluators
  auto grad_p = [u, d, cfg, dim](const Vec& x) {
    const Vec lap = fd_vector_laplacian(u, x, cfg);
    const Mat Ju = fd_jacobian(u, x, cfg);
    const Vec uv = u(x);
    const double h = cfg.relative_step * x.norm();
    auto sigma = [&](const Vec& y, int i, int j) {
      const Mat J = fd_jacobian(d, y, cfg);
      double s = 0;
      for (int a = 0; a < dim; ++a) s += J(a, i) * J(a, j);
      return s;
    };
    Vec E(dim);
    for (int i = 0; i < dim; ++i) {
      double acc = 0;
      for (int j = 0; j < dim; ++j) {
        const Vec e = Vec::unit(dim, j);
        acc += (sigma(x + h * e, i, j) - sigma(x - h * e, i, j)) / (2 * h);
      }
      E[i] = acc;
    }
    return lap - Ju * uv - E;
  };
  return pressure_recovery_from_gradient(grad_p, dim, base_point, grid, cfg);
}

// ---------------------------------------------------------------------------

EquationReport sphere_director_residual(const SolutionSpec& spec, int resolution) {
  // self-similarity precondition
  {
    GridSpec g = GridSpec::defaults(spec.dim);
    g.n_radial = 2;
    for (int& a : g.angular) a = std::max(2, a / 4);
    const EquationReport sc = scaling_check(spec, {0.5, 2.0}, g);
    if (sc.sup > 1e-8)
      throw Error(errc::precondition, "sphere_director_residual: spec is not self-similar");
  }
  const Quadrature quad = sphere_quadrature(spec.dim, resolution);
  const StencilConfig cfg;
  const DerivKit kit(spec, cfg);

  EquationReport rep;
  rep.equation = Equation::advected_hm_sphere;
  rep.mode = kit.effective_mode();
  rep.grid = GridSpec{1.0 - 1e-9, 1.0 + 1e-9, 2, {resolution}};  // nominal record

  std::vector<double> vals(quad.nodes.size());
  for (std::size_t i = 0; i < quad.nodes.size(); ++i) {
    const Vec& th = quad.nodes[i];
    // ambient operators restrict to the intrinsic ones at r = 1 for
    // degree-0 homogeneous d
    const Vec d = spec.eval.d(th);
    const Mat gd = kit.grad_d(th);
    const Vec lap = kit.lap_d(th);
    const Vec u = spec.eval.u(th);
    const Vec v = u - u.dot(th) * th;
    const Vec res = lap + gd.frobenius2() * d - gd * v;
    vals[i] = res.norm();
    if (vals[i] > rep.sup) {
      rep.sup = vals[i];
      rep.worst_point = th;
    }
  }
  std::vector<double> sq(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) sq[i] = vals[i] * vals[i];
  rep.rms = std::sqrt(pairwise_sum(sq) / double(vals.size()));
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// flattened component arrays so nested stencils compose uniformly
using TensorField = std::function<std::vector<double>(const Vec&)>;

// central difference of every component of T along every axis; returns the
// flattened next-order tensor
std::vector<double> tensor_gradient(const TensorField& T, const Vec& x, const StencilConfig& cfg) {
  const int n = x.dim();
  const double h = cfg.relative_step * x.norm();
  std::vector<double> out;
  for (int j = 0; j < n; ++j) {
    const Vec e = Vec::unit(n, j);
    std::vector<double> diff;
    if (cfg.order == 2) {
      const auto a = T(x + h * e), b = T(x - h * e);
      diff.resize(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) diff[i] = (a[i] - b[i]) / (2 * h);
    } else {
      const auto a2 = T(x + 2 * h * e), a1 = T(x + h * e), b1 = T(x - h * e),
                 b2 = T(x - 2 * h * e);
      diff.resize(a1.size());
      for (std::size_t i = 0; i < a1.size(); ++i)
        diff[i] = (-a2[i] + 8 * a1[i] - 8 * b1[i] + b2[i]) / (12 * h);
    }
    out.insert(out.end(), diff.begin(), diff.end());
  }
  return out;
}

double frobenius(const std::vector<double>& t) {
  double s = 0;
  for (double v : t) s += v * v;
  return std::sqrt(s);
}

std::vector<double> flatten(const Mat& m) {
  std::vector<double> out(m.dim() * (std::size_t)m.dim());
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out[i * m.dim() + j] = m(i, j);
  return out;
}

std::vector<double> flatten(const Vec& v) {
  std::vector<double> out(v.dim());
  for (int i = 0; i < v.dim(); ++i) out[i] = v[i];
  return out;
}

}  // namespace

DecayReport decay_estimate_check(const SolutionSpec& spec, const std::vector<int>& orders,
                                 const std::vector<double>& radii, const StencilConfig& cfg) {
  const DerivKit kit(spec, cfg);
  const int n = spec.dim;
  DecayReport out;
  out.orders = orders;
  out.radii = radii;
  out.u_vals.assign(orders.size(), std::vector<double>(radii.size(), 0.0));
  out.p_vals = out.u_vals;
  out.d_vals = out.u_vals;

  const Quadrature quad = sphere_quadrature(n, n == 2 ? 12 : 6);
  const TensorField grad_u_t = [&](const Vec& y) { return flatten(kit.grad_u(y)); };
  const TensorField grad_p_t = [&](const Vec& y) { return flatten(kit.grad_p(y)); };
  const TensorField grad_d_t = [&](const Vec& y) { return flatten(kit.grad_d(y)); };
  const TensorField d2_d_t = [&](const Vec& y) { return tensor_gradient(grad_d_t, y, cfg); };

  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double r = radii[ri];
    for (const Vec& node : quad.nodes) {
      const Vec x = r * node;
      for (std::size_t oi = 0; oi < orders.size(); ++oi) {
        const int k = orders[oi];
        double uval, pval, dval;
        switch (k) {
          case 0:
            uval = spec.eval.u(x).norm();
            pval = std::abs(spec.eval.p(x));
            dval = kit.grad_d(x).frobenius();
            break;
          case 1:
            uval = kit.grad_u(x).frobenius();
            pval = kit.grad_p(x).norm();
            dval = frobenius(tensor_gradient(grad_d_t, x, cfg));
            break;
          case 2:
            uval = frobenius(tensor_gradient(grad_u_t, x, cfg));
            pval = frobenius(tensor_gradient(grad_p_t, x, cfg));
            dval = frobenius(tensor_gradient(d2_d_t, x, cfg));
            break;
          default:
            throw Error(errc::validation, "decay_estimate_check: orders k in {0,1,2}");
        }
        out.u_vals[oi][ri] = std::max(out.u_vals[oi][ri], std::pow(r, k + 1) * uval);
        out.p_vals[oi][ri] = std::max(out.p_vals[oi][ri], std::pow(r, k + 2) * pval);
        out.d_vals[oi][ri] = std::max(out.d_vals[oi][ri], std::pow(r, k + 1) * dval);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

VerifyReport verify_solution(const SolutionSpec& spec, const GridSpec& grid,
                             const StencilConfig& cfg, double threshold) {
  VerifyReport v;
  v.threshold = threshold;
  v.reports.push_back(momentum_residual(spec, grid, cfg));
  v.reports.push_back(continuity_residual(spec, grid, cfg));
  v.reports.push_back(director_residual(spec, grid, cfg));
  v.reports.push_back(unit_length_check(spec, grid));
  v.reports.push_back(scaling_check(spec, {0.5, 2.0, 10.0}, grid));
  v.smallness = smallness_norms(spec, grid, cfg);
  v.decay = decay_estimate_check(spec, {0, 1, 2}, {0.5, 1.0, 2.0}, cfg);
  v.pass = true;
  for (const auto& r : v.reports)
    if (r.sup > threshold) v.pass = false;
  return v;
}

nlohmann::json report_to_json(const EquationReport& r) {
  nlohmann::json wp = nlohmann::json::array();
  for (int i = 0; i < r.worst_point.dim(); ++i) wp.push_back(r.worst_point[i]);
  nlohmann::json grid = {{"r_min", r.grid.r_min},
                         {"r_max", r.grid.r_max},
                         {"n_radial", r.grid.n_radial},
                         {"angular", r.grid.angular}};
  return {{"equation", equation_name(r.equation)},
          {"sup", r.sup},
          {"rms", r.rms},
          {"worst_point", wp},
          {"grid", grid},
          {"mode", r.mode == DerivMode::forced_fd ? "fd" : "analytic"}};
}

nlohmann::json verify_to_json(const VerifyReport& v, const SolutionSpec& spec) {
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : v.reports) reports.push_back(report_to_json(r));
  nlohmann::json j = {{"spec", spec_to_json(spec)}, {"reports", reports}};
  j["smallness"] = {{"M_u", v.smallness.M_u},
                    {"M_d", v.smallness.M_d},
                    {"radii", v.smallness.radii},
                    {"per_sphere_u", v.smallness.per_sphere_u},
                    {"per_sphere_d", v.smallness.per_sphere_d}};
  j["decay"] = {{"orders", v.decay.orders},
                {"radii", v.decay.radii},
                {"u", v.decay.u_vals},
                {"p", v.decay.p_vals},
                {"d", v.decay.d_vals}};
  j["pass"] = v.pass;
  j["threshold"] = v.threshold;
  return j;
}

}  // namespace ssel
