#include "ssel/families.hpp"

#include <algorithm>
#include <cmath>

namespace ssel {

std::string family_name(Family f) {
  switch (f) {
    case Family::case_i: return "case_i";
    case Family::case_ii: return "case_ii";
    case Family::case_iii: return "case_iii";
    case Family::landau: return "landau";
    case Family::hedgehog: return "hedgehog";
    case Family::constant_director: return "constant_director";
    case Family::custom_profile: return "custom_profile";
  }
  throw Error(errc::validation, "unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "case_i") return Family::case_i;
  if (name == "case_ii") return Family::case_ii;
  if (name == "case_iii") return Family::case_iii;
  if (name == "landau") return Family::landau;
  if (name == "hedgehog") return Family::hedgehog;
  if (name == "constant_director") return Family::constant_director;
  if (name == "custom_profile") return Family::custom_profile;
  throw Error(errc::validation, "unknown family: " + name);
}

// ---------------------------------------------------------------------------
// Shared 2D evaluators for the self-similar decomposition
//   u = (f(th) e_r + v e_th)/r,  p = (2 f(th) + q_const)/r^2,
//   d = (cos(beta), sin(beta)) with beta = winding*th + beta0.

namespace {

struct Profile2D {
  std::function<double(double)> f, fp, fpp;  // phase shift already applied
  double v = 0;
  double q_const = 0;
  double beta0 = 0;
  double winding = 0;
};

Evaluators make_2d_evaluators(const Profile2D& pf) {
  Evaluators ev;
  ev.dim = 2;
  auto f = pf.f, fp = pf.fp, fpp = pf.fpp;
  const double v = pf.v, qc = pf.q_const, b0 = pf.beta0, w = pf.winding;

  ev.u = [f, v](const Vec& x) {
    const double r2 = x.norm2();
    const double th = std::atan2(x[1], x[0]);
    const double fv = f(th);
    return Vec((fv * x[0] - v * x[1]) / r2, (fv * x[1] + v * x[0]) / r2);
  };
  ev.p = [f, qc](const Vec& x) {
    const double th = std::atan2(x[1], x[0]);
    return (2 * f(th) + qc) / x.norm2();
  };
  ev.d = [w, b0](const Vec& x) {
    const double beta = w * std::atan2(x[1], x[0]) + b0;
    return Vec(std::cos(beta), std::sin(beta));
  };
  ev.grad_u = [f, fp, v](const Vec& x) {
    const double r2 = x.norm2();
    const double th = std::atan2(x[1], x[0]);
    const double c = x[0] / std::sqrt(r2), s = x[1] / std::sqrt(r2);
    const double fv = f(th), fpv = fp(th);
    const double U0 = fv * c - v * s, U1 = fv * s + v * c;
    const double Up0 = (fpv - v) * c - fv * s, Up1 = (fpv - v) * s + fv * c;
    Mat J(2);
    J(0, 0) = (Up0 * -s - U0 * c) / r2;
    J(0, 1) = (Up0 * c - U0 * s) / r2;
    J(1, 0) = (Up1 * -s - U1 * c) / r2;
    J(1, 1) = (Up1 * c - U1 * s) / r2;
    return J;
  };
  ev.lap_u = [f, fp, fpp, v](const Vec& x) {
    const double r = x.norm(), r3 = r * r * r;
    const double th = std::atan2(x[1], x[0]);
    const double c = x[0] / r, s = x[1] / r;
    const double fv = f(th), fpv = fp(th), fppv = fpp(th);
    // U'' + U with U = f e_r + v e_th
    const double A = fppv - fv + fv;  // e_r component of U''+U is (f''-f)+f = f''
    const double B = (2 * fpv - v) + v;  // e_th component is (2f'-v)+v = 2f'
    return Vec((A * c - B * s) / r3, (A * s + B * c) / r3);
  };
  ev.grad_p = [f, fp, qc](const Vec& x) {
    const double r = x.norm(), r3 = r * r * r;
    const double th = std::atan2(x[1], x[0]);
    const double c = x[0] / r, s = x[1] / r;
    const double q = 2 * f(th) + qc, qp = 2 * fp(th);
    return Vec((qp * -s - 2 * q * c) / r3, (qp * c - 2 * q * s) / r3);
  };
  ev.grad_d = [w, b0](const Vec& x) {
    const double r2 = x.norm2();
    const double beta = w * std::atan2(x[1], x[0]) + b0;
    Mat J(2);
    // grad d_a = (d/dbeta d_a) * w * e_th / r;  e_th/r = (-y, x)/r^2
    J(0, 0) = -std::sin(beta) * w * -x[1] / r2;
    J(0, 1) = -std::sin(beta) * w * x[0] / r2;
    J(1, 0) = std::cos(beta) * w * -x[1] / r2;
    J(1, 1) = std::cos(beta) * w * x[0] / r2;
    return J;
  };
  ev.lap_d = [w, b0](const Vec& x) {
    const double r2 = x.norm2();
    const double beta = w * std::atan2(x[1], x[0]) + b0;
    return Vec(-w * w * std::cos(beta) / r2, -w * w * std::sin(beta) / r2);
  };
  ev.ericksen_div = [w](const Vec& x) {
    const double r2 = x.norm2();
    // div(grad d ⊙ grad d) = -w^2 e_r / r^3 for constant winding
    return Vec(-w * w * x[0] / (r2 * r2), -w * w * x[1] / (r2 * r2));
  };
  return ev;
}

std::function<double(double)> constant_fn(double value) {
  return [value](double) { return value; };
}

}  // namespace

// ---------------------------------------------------------------------------

SolutionSpec make_case_i(double c, int m, double theta0) {
  if (!std::isfinite(c) || !std::isfinite(theta0))
    throw Error(errc::validation, "make_case_i: parameters must be finite");
  SolutionSpec spec;
  spec.family = Family::case_i;
  spec.dim = 2;
  spec.params = {{"c", c}, {"m", m}, {"theta0", theta0}};
  Profile2D pf;
  pf.f = constant_fn(c);
  pf.fp = constant_fn(0);
  pf.fpp = constant_fn(0);
  pf.v = 0;
  const double mp1 = double(m) + 1.0;
  pf.q_const = -(mp1 * mp1 + c * c) / 2 - 2 * c;  // q = -((m+1)^2 + c^2)/2
  pf.beta0 = theta0;
  pf.winding = mp1;
  spec.eval = make_2d_evaluators(pf);
  return spec;
}

namespace {

SolutionSpec assemble_case_ii(Family family, double Phi, int k, int m, double theta1,
                              double theta2, ProfileSolution profile) {
  SolutionSpec spec;
  spec.family = family;
  spec.dim = 2;
  spec.params = {{"Phi", Phi}, {"k", k}, {"m", m}, {"theta1", theta1}, {"theta2", theta2}};
  const double mp1 = double(m) + 1.0;
  Profile2D pf;
  const ProfileSolution prof = profile;  // copy captured by the closures
  pf.f = [prof, theta1](double th) { return prof.f(th + theta1); };
  pf.fp = [prof, theta1](double th) { return prof.fp(th + theta1); };
  pf.fpp = [prof, theta1](double th) { return prof.fpp(th + theta1); };
  pf.v = 0;
  pf.q_const = -(mp1 * mp1 + prof.lambda) / 2;  // q = 2f - ((m+1)^2 + lambda)/2
  pf.beta0 = theta2;
  pf.winding = mp1;
  spec.eval = make_2d_evaluators(pf);
  spec.profile = std::move(profile);
  return spec;
}

}  // namespace

SolutionSpec make_case_ii(double Phi, int k, int m, double theta1, double theta2,
                          const ShootingConfig& cfg) {
  if (k < 1) throw Error(errc::validation, "make_case_ii: k must be a positive integer");
  if (!existence_condition(Phi, k))
    throw Error(errc::solver,
                "make_case_ii: no solution family, the condition 4 + Phi/pi <= k^2 fails");
  ProfileSolution prof = solve_profile(Phi, k, cfg);
  return assemble_case_ii(Family::case_ii, Phi, k, m, theta1, theta2, std::move(prof));
}

SolutionSpec make_case_iii(double Psi, double mu, double theta3) {
  if (mu == 0.0)
    throw Error(errc::validation, "make_case_iii: mu must be nonzero (mu = 0 is case_i/ii)");
  if (!std::isfinite(Psi) || !std::isfinite(mu) || !std::isfinite(theta3))
    throw Error(errc::validation, "make_case_iii: parameters must be finite");
  SolutionSpec spec;
  spec.family = Family::case_iii;
  spec.dim = 2;
  spec.params = {{"Psi", Psi}, {"mu", mu}, {"theta3", theta3}};
  const double f0 = Psi / (2 * M_PI);
  Profile2D pf;
  pf.f = constant_fn(f0);
  pf.fp = constant_fn(0);
  pf.fpp = constant_fn(0);
  pf.v = mu;
  pf.q_const = -(f0 * f0 + mu * mu) / 2 - 2 * f0;  // q = -|u|^2 r^2 / 2
  pf.beta0 = theta3;  // xi = -th + theta3, so beta = xi + th = theta3
  pf.winding = 0;
  spec.eval = make_2d_evaluators(pf);
  return spec;
}

// ---------------------------------------------------------------------------
// Landau family (n = 3): u = F(s) x/r^2 + G(s) e3/r with s = x3/r,
//   F(s) = 2(a s - 1)/(a - s)^2,  G(s) = 2/(a - s),
// which is curl(psi_a e_theta) for psi_a = 2 sin(phi)/(a - cos(phi)).
// The pressure is recovered, not hard-coded: grad p = lap u - (u.grad)u is
// integrated along the meridian at r = 1, anchored by the radial doubling
// integral (p is homogeneous of degree -2), and stored as a Chebyshev
// series P(s) with p = P(s)/r^2.

namespace {

struct Cheb {
  std::vector<double> c;  // P(s) = sum c_k T_k(s)

  double eval(double s) const {
    double b1 = 0, b2 = 0;
    for (int k = (int)c.size() - 1; k >= 1; --k) {
      const double b0 = 2 * s * b1 - b2 + c[k];
      b2 = b1;
      b1 = b0;
    }
    return s * b1 - b2 + c[0];
  }
  Cheb derivative() const {
    const int N = (int)c.size() - 1;
    std::vector<double> t(N + 2, 0.0);
    for (int k = N; k >= 1; --k) t[k - 1] = t[k + 1] + 2.0 * k * c[k];
    t[0] /= 2;
    Cheb d;
    d.c.assign(t.begin(), t.begin() + std::max(N, 1));
    return d;
  }
};

// fit sum c_k T_k through values at Lobatto nodes s_j = cos(pi j / N)
Cheb cheb_fit(const std::vector<double>& y) {
  const int N = (int)y.size() - 1;
  Cheb out;
  out.c.assign(N + 1, 0.0);
  for (int k = 0; k <= N; ++k) {
    double s = 0.5 * (y[0] + (k % 2 == 0 ? y[N] : -y[N]));
    for (int j = 1; j < N; ++j) s += y[j] * std::cos(M_PI * j * k / N);
    out.c[k] = 2.0 * s / N;
  }
  out.c[0] /= 2;
  out.c[N] /= 2;
  return out;
}

struct LandauField {
  double a;
  double F(double s) const { return 2 * (a * s - 1) / ((a - s) * (a - s)); }
  double Fp(double s) const {
    const double d = a - s;
    return 2 * (a * a + a * s - 2) / (d * d * d);
  }
  double Fpp(double s) const {
    const double d = a - s;
    return 4 * (2 * a * a + a * s - 3) / (d * d * d * d);
  }
  double G(double s) const { return 2 / (a - s); }
  double Gp(double s) const {
    const double d = a - s;
    return 2 / (d * d);
  }
  double Gpp(double s) const {
    const double d = a - s;
    return 4 / (d * d * d);
  }

  Vec u(const Vec& x) const {
    const double r = x.norm(), r2 = r * r;
    const double s = x[2] / r;
    const double Fv = F(s), Gv = G(s);
    return Vec(Fv * x[0] / r2, Fv * x[1] / r2, Fv * x[2] / r2 + Gv / r);
  }
  Mat grad_u(const Vec& x) const {
    const double r = x.norm(), r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
    const double s = x[2] / r;
    const double Fv = F(s), Fpv = Fp(s), Gv = G(s), Gpv = Gp(s);
    Mat J(3);
    for (int j = 0; j < 3; ++j) {
      const double sj = ((j == 2 ? 1.0 : 0.0) - s * x[j] / r) / r;
      for (int i = 0; i < 3; ++i) {
        double v = Fpv * sj * x[i] / r2 + Fv * ((i == j ? 1.0 : 0.0) / r2 - 2 * x[i] * x[j] / r4);
        if (i == 2) v += Gpv * sj / r - Gv * x[j] / r3;
        J(i, j) = v;
      }
    }
    return J;
  }
  Vec lap_u(const Vec& x) const {
    const double r = x.norm(), r2 = r * r, r3 = r2 * r, r4 = r2 * r2;
    const double s = x[2] / r, oms = 1 - s * s;
    const double radial = Fpp(s) * oms - 4 * s * Fp(s) - 2 * F(s);
    Vec lap(3);
    for (int i = 0; i < 3; ++i) lap[i] = x[i] * radial / r4;
    lap[2] += 2 * Fp(s) / r3 + (Gpp(s) * oms - 2 * s * Gp(s)) / r3;
    return lap;
  }
};

}  // namespace

SolutionSpec make_landau(double a) {
  if (!(a > 1.0))
    throw Error(errc::validation, "make_landau: parameter a must lie in (1, inf]");
  SolutionSpec spec;
  spec.family = Family::landau;
  spec.dim = 3;
  spec.params = {{"a", std::isinf(a) ? nlohmann::json("inf") : nlohmann::json(a)}};

  if (std::isinf(a)) {
    spec.eval.dim = 3;
    spec.eval.u = [](const Vec&) { return Vec(0.0, 0.0, 0.0); };
    spec.eval.p = [](const Vec&) { return 0.0; };
    spec.eval.d = [](const Vec&) { return Vec(0.0, 0.0, 1.0); };
    spec.eval.grad_u = [](const Vec&) { return Mat(3); };
    spec.eval.lap_u = [](const Vec&) { return Vec(3); };
    spec.eval.grad_p = [](const Vec&) { return Vec(3); };
    spec.eval.grad_d = [](const Vec&) { return Mat(3); };
    spec.eval.lap_d = [](const Vec&) { return Vec(3); };
    spec.eval.ericksen_div = [](const Vec&) { return Vec(3); };
    return spec;
  }

  const LandauField lf{a};
  auto gradp_field = [lf](const Vec& x) { return lf.lap_u(x) - lf.grad_u(x) * lf.u(x); };

  // meridian values of P(phi) at Lobatto nodes phi_j = pi j / N (s_j Lobatto in [-1,1])
  const int N = 128;
  auto meridian_point = [](double phi) { return Vec(std::sin(phi), 0.0, std::cos(phi)); };
  auto meridian_tangent = [](double phi) { return Vec(std::cos(phi), 0.0, -std::sin(phi)); };

  std::vector<double> gl_x, gl_w;
  gauss_legendre(16, gl_x, gl_w);

  // anchor on the equator: p(2x)-p(x) = -(3/4) p(x) for a degree -2 pressure
  double anchor = 0;
  {
    const Vec e_mid = meridian_point(M_PI / 2);
    double I = 0;
    const int panels = 8;
    for (int p = 0; p < panels; ++p) {
      const double lo = 1.0 + p / double(panels), hi = 1.0 + (p + 1) / double(panels);
      for (int g = 0; g < 16; ++g) {
        const double rho = 0.5 * (hi - lo) * gl_x[g] + 0.5 * (hi + lo);
        I += 0.5 * (hi - lo) * gl_w[g] * gradp_field(rho * e_mid).dot(e_mid);
      }
    }
    anchor = -(4.0 / 3.0) * I;
  }

  std::vector<double> P(N + 1, 0.0);
  const int j_mid = N / 2;
  P[j_mid] = anchor;
  auto panel = [&](double lo, double hi) {
    double I = 0;
    for (int g = 0; g < 16; ++g) {
      const double phi = 0.5 * (hi - lo) * gl_x[g] + 0.5 * (hi + lo);
      I += 0.5 * (hi - lo) * gl_w[g] * gradp_field(meridian_point(phi)).dot(meridian_tangent(phi));
    }
    return I;
  };
  for (int j = j_mid + 1; j <= N; ++j) P[j] = P[j - 1] + panel(M_PI * (j - 1) / N, M_PI * j / N);
  for (int j = j_mid - 1; j >= 0; --j) P[j] = P[j + 1] - panel(M_PI * j / N, M_PI * (j + 1) / N);

  // Lobatto phi ordering maps to s_j = cos(pi j/N), exactly the Chebyshev nodes
  const Cheb Pc = cheb_fit(P);
  const Cheb Pcp = Pc.derivative();

  // curl-compatibility certificate of the recovered gradient field
  double cert = 0;
  {
    StencilConfig fd;
    const GridSpec g = GridSpec::defaults(3);
    for (const Vec& x : annulus_grid(g, 3)) {
      const Mat J = fd_jacobian(gradp_field, x, fd);
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) cert = std::max(cert, std::abs(J(i, j) - J(j, i)));
    }
  }
  spec.landau_certificate = cert;
  if (cert > 1e-5)
    throw Error(errc::solver, "make_landau: pressure compatibility certificate failed");

  spec.eval.dim = 3;
  spec.eval.u = [lf](const Vec& x) { return lf.u(x); };
  spec.eval.grad_u = [lf](const Vec& x) { return lf.grad_u(x); };
  spec.eval.lap_u = [lf](const Vec& x) { return lf.lap_u(x); };
  spec.eval.p = [Pc](const Vec& x) {
    const double r2 = x.norm2();
    return Pc.eval(x[2] / std::sqrt(r2)) / r2;
  };
  spec.eval.grad_p = [Pc, Pcp](const Vec& x) {
    const double r = x.norm(), r2 = r * r, r4 = r2 * r2;
    const double s = x[2] / r;
    const double Pv = Pc.eval(s), Ppv = Pcp.eval(s);
    Vec g(3);
    for (int j = 0; j < 3; ++j) {
      const double sj = ((j == 2 ? 1.0 : 0.0) - s * x[j] / r) / r;
      g[j] = Ppv * sj / r2 - 2 * Pv * x[j] / r4;
    }
    return g;
  };
  spec.eval.d = [](const Vec&) { return Vec(0.0, 0.0, 1.0); };
  spec.eval.grad_d = [](const Vec&) { return Mat(3); };
  spec.eval.lap_d = [](const Vec&) { return Vec(3); };
  spec.eval.ericksen_div = [](const Vec&) { return Vec(3); };
  return spec;
}

// ---------------------------------------------------------------------------

SolutionSpec make_hedgehog(int n) {
  if (n < 2 || n > 4) throw Error(errc::validation, "make_hedgehog: n must be 2, 3, or 4");
  SolutionSpec spec;
  spec.family = Family::hedgehog;
  spec.dim = n;
  spec.params = nlohmann::json::object();
  spec.eval.dim = n;
  spec.eval.u = [n](const Vec&) { return Vec::zero(n); };
  spec.eval.p = [n](const Vec& x) { return -(n - 1) / (2 * x.norm2()); };
  spec.eval.d = [](const Vec& x) { return x.normalized(); };
  spec.eval.grad_u = [n](const Vec&) { return Mat(n); };
  spec.eval.lap_u = [n](const Vec&) { return Vec::zero(n); };
  spec.eval.grad_p = [n](const Vec& x) {
    const double r2 = x.norm2();
    return (double(n - 1) / (r2 * r2)) * x;
  };
  spec.eval.grad_d = [n](const Vec& x) {
    const double r = x.norm(), r3 = r * r * r;
    Mat J(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) J(i, j) = (i == j ? 1.0 / r : 0.0) - x[i] * x[j] / r3;
    return J;
  };
  spec.eval.lap_d = [n](const Vec& x) {
    const double r = x.norm();
    return (-(n - 1) / (r * r * r)) * x;
  };
  spec.eval.ericksen_div = [n](const Vec& x) {
    const double r2 = x.norm2();
    return (-(n - 1) / (r2 * r2)) * x;
  };
  return spec;
}

SolutionSpec make_constant_director(int n, const Vec& d0) {
  if (n < 2 || n > 4 || d0.dim() != n)
    throw Error(errc::validation, "make_constant_director: dimension mismatch");
  if (std::abs(d0.norm() - 1.0) > 1e-12)
    throw Error(errc::validation, "make_constant_director: director must be a unit vector");
  SolutionSpec spec;
  spec.family = Family::constant_director;
  spec.dim = n;
  nlohmann::json dir = nlohmann::json::array();
  for (int i = 0; i < n; ++i) dir.push_back(d0[i]);
  spec.params = {{"d0", dir}};
  spec.eval.dim = n;
  spec.eval.u = [n](const Vec&) { return Vec::zero(n); };
  spec.eval.p = [](const Vec&) { return 0.0; };
  spec.eval.d = [d0](const Vec&) { return d0; };
  spec.eval.grad_u = [n](const Vec&) { return Mat(n); };
  spec.eval.lap_u = [n](const Vec&) { return Vec::zero(n); };
  spec.eval.grad_p = [n](const Vec&) { return Vec::zero(n); };
  spec.eval.grad_d = [n](const Vec&) { return Mat(n); };
  spec.eval.lap_d = [n](const Vec&) { return Vec::zero(n); };
  spec.eval.ericksen_div = [n](const Vec&) { return Vec::zero(n); };
  return spec;
}

// ---------------------------------------------------------------------------
// Serialization.

namespace {

nlohmann::json profile_to_json(const ProfileSolution& p, int m) {
  const double mp1 = double(m) + 1.0;
  return {{"fourier_cos", p.fourier_cos}, {"fourier_sin", p.fourier_sin},
          {"lambda", p.lambda},           {"C1", (mp1 * mp1 - p.lambda) / 2},
          {"k", p.k},                     {"Phi", p.Phi}};
}

ProfileSolution profile_from_json(const nlohmann::json& j) {
  ProfileSolution p;
  p.fourier_cos = j.at("fourier_cos").get<std::vector<double>>();
  p.fourier_sin = j.at("fourier_sin").get<std::vector<double>>();
  if (p.fourier_cos.empty() || p.fourier_sin.size() != p.fourier_cos.size())
    throw Error(errc::validation, "profile: malformed fourier arrays");
  p.lambda = j.at("lambda").get<double>();
  p.k = j.at("k").get<int>();
  p.Phi = j.at("Phi").get<double>();
  p.E = p.lambda + 4;
  p.g0 = p.f(0.0) + 2;
  p.C1_ode = (1.0 - p.lambda) / 2;
  double fmin = 1e300, fmax = -1e300, sup = 0, int_f2 = 0;
  const int nd = 2048;
  for (int i = 0; i < nd; ++i) {
    const double th = 2 * M_PI * i / nd;
    const double fv = p.f(th);
    fmin = std::min(fmin, fv);
    fmax = std::max(fmax, fv);
    sup = std::max(sup, std::abs(p.fpp(th) + fv * fv + 4 * fv - p.lambda));
    int_f2 += fv * fv;
  }
  int_f2 *= 2 * M_PI / nd;
  p.amplitude = (fmax - fmin) / 2;
  p.residual_sup = sup;
  p.degenerate = p.amplitude == 0.0;
  p.C1_paper_formula = -int_f2 / (4 * M_PI) - 2 * p.Phi / M_PI + 0.5;
  return p;
}

}  // namespace

nlohmann::json spec_to_json(const SolutionSpec& spec) {
  nlohmann::json j = {
      {"family", family_name(spec.family)}, {"dim", spec.dim}, {"params", spec.params}};
  if (spec.profile) {
    const int m = spec.params.value("m", 0);
    j["profile"] = profile_to_json(*spec.profile, m);
  }
  return j;
}

SolutionSpec spec_from_json(const nlohmann::json& j) {
  Family family;
  int dim;
  nlohmann::json params;
  try {
    family = family_from_name(j.at("family").get<std::string>());
    dim = j.at("dim").get<int>();
    params = j.at("params");
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::validation, std::string("malformed spec: ") + e.what());
  }

  try {
    switch (family) {
      case Family::case_i:
        return make_case_i(params.at("c").get<double>(), params.at("m").get<int>(),
                           params.at("theta0").get<double>());
      case Family::case_ii:
      case Family::custom_profile: {
        if (!j.contains("profile"))
          throw Error(errc::validation, "case_ii/custom_profile spec requires a profile");
        ProfileSolution prof = profile_from_json(j.at("profile"));
        SolutionSpec spec = assemble_case_ii(
            family, params.value("Phi", prof.Phi), params.value("k", prof.k),
            params.value("m", 0), params.value("theta1", 0.0), params.value("theta2", 0.0),
            std::move(prof));
        spec.params = params;
        return spec;
      }
      case Family::case_iii:
        return make_case_iii(params.at("Psi").get<double>(), params.at("mu").get<double>(),
                             params.at("theta3").get<double>());
      case Family::landau: {
        const auto& av = params.at("a");
        const double a =
            av.is_string() ? std::numeric_limits<double>::infinity() : av.get<double>();
        return make_landau(a);
      }
      case Family::hedgehog:
        return make_hedgehog(dim);
      case Family::constant_director: {
        const auto dir = params.at("d0").get<std::vector<double>>();
        Vec d0((int)dir.size());
        for (std::size_t i = 0; i < dir.size(); ++i) d0[(int)i] = dir[i];
        return make_constant_director(dim, d0);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(errc::validation, std::string("malformed spec params: ") + e.what());
  }
  throw Error(errc::validation, "malformed spec");
}

// ---------------------------------------------------------------------------
// Classification of sampled profiles.

ProfileSamples sample_profiles(const SolutionSpec& spec, int n_samples) {
  if (spec.dim != 2)
    throw Error(errc::validation, "sample_profiles: requires a two-dimensional spec");
  ProfileSamples s;
  s.f.resize(n_samples);
  s.v.resize(n_samples);
  s.q.resize(n_samples);
  s.xi.resize(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    const double th = 2 * M_PI * i / n_samples;
    const auto [e_r, e_th] = polar_basis(th);
    const Vec x = e_r;  // r = 1
    const Vec u = spec.eval.u(x);
    const Vec d = spec.eval.d(x);
    s.f[i] = u.dot(e_r);
    s.v[i] = u.dot(e_th);
    s.q[i] = spec.eval.p(x);
    s.xi[i] = std::atan2(d.dot(e_th), d.dot(e_r));
  }
  return s;
}

namespace {

struct Spectral {
  // real DFT of N uniform samples on [0,2pi): f = A0 + sum_j Aj cos + Bj sin
  std::vector<double> A, B;
  int N;

  explicit Spectral(const std::vector<double>& y) : N((int)y.size()) {
    const int M = N / 2;
    A.assign(M + 1, 0.0);
    B.assign(M + 1, 0.0);
    for (int j = 0; j <= M; ++j) {
      double a = 0, b = 0;
      for (int i = 0; i < N; ++i) {
        const double ph = 2 * M_PI * j * i / N;
        a += y[i] * std::cos(ph);
        b += y[i] * std::sin(ph);
      }
      const double scale = (j == 0 || 2 * j == N) ? 1.0 : 2.0;
      A[j] = scale * a / N;
      B[j] = scale * b / N;
    }
  }
  double deriv1(double th) const {
    double s = 0;
    for (std::size_t j = 1; j < A.size(); ++j)
      s += j * (-A[j] * std::sin(j * th) + B[j] * std::cos(j * th));
    return s;
  }
  double deriv2(double th) const {
    double s = 0;
    for (std::size_t j = 1; j < A.size(); ++j)
      s -= double(j) * j * (A[j] * std::cos(j * th) + B[j] * std::sin(j * th));
    return s;
  }
};

double wrap_pi(double x) {
  while (x > M_PI) x -= 2 * M_PI;
  while (x < -M_PI) x += 2 * M_PI;
  return x;
}

}  // namespace

ClassifyResult classify_profile(const ProfileSamples& s) {
  const int N = (int)s.f.size();
  if (N < 16 || (int)s.v.size() != N || (int)s.q.size() != N || (int)s.xi.size() != N)
    throw Error(errc::validation, "classify_profile: need >= 16 aligned samples");

  // unwrap xi and split off the integer winding
  std::vector<double> xiu(N);
  xiu[0] = s.xi[0];
  for (int i = 1; i < N; ++i) xiu[i] = xiu[i - 1] + wrap_pi(s.xi[i] - s.xi[i - 1]);
  const double closure = wrap_pi(s.xi[0] - s.xi[N - 1]);
  const int winding = (int)std::lround((xiu[N - 1] + closure - xiu[0]) / (2 * M_PI));
  std::vector<double> xip(N);  // periodic part of xi
  for (int i = 0; i < N; ++i) xip[i] = xiu[i] - winding * (2 * M_PI * i / N);

  const Spectral Sf(s.f), Sv(s.v), Sq(s.q), Sxi(xip);

  double scale = 1.0;
  for (int i = 0; i < N; ++i)
    scale = std::max({scale, std::abs(s.f[i]), std::abs(s.v[i]), std::abs(s.q[i])});
  const double tol = 1e-6 * scale * scale;

  // reduced-system residual (radial momentum, angular momentum, continuity,
  // director); the director stress enters the momentum rows with the sign
  // that balances the hedgehog (see the header note)
  double sup1 = 0, sup2 = 0, sup3 = 0, sup4 = 0;
  for (int i = 0; i < N; ++i) {
    const double th = 2 * M_PI * i / N;
    const double f = s.f[i], v = s.v[i], q = s.q[i];
    const double fp = Sf.deriv1(th), fpp = Sf.deriv2(th);
    const double vp = Sv.deriv1(th);
    const double qp = Sq.deriv1(th);
    const double xip1 = winding + Sxi.deriv1(th), xipp = Sxi.deriv2(th);
    const double w = (xip1 + 1) * (xip1 + 1);
    sup1 = std::max(sup1, std::abs(-fpp + v * fp - f * f - v * v - 2 * q - w));
    sup2 = std::max(sup2, std::abs(qp - 2 * fp + 2 * (xip1 + 1) * xipp));
    sup3 = std::max(sup3, std::abs(vp));
    sup4 = std::max(sup4, std::abs(xipp - v * (xip1 + 1)));
  }
  if (sup1 > tol || sup2 > tol || sup3 > tol || sup4 > tol)
    throw Error(errc::validation, "classify_profile: unclassifiable (reduced equations fail)");

  auto mean = [N](const std::vector<double>& y) {
    double m = 0;
    for (double v : y) m += v;
    return m / N;
  };
  auto dev = [&](const std::vector<double>& y, double m) {
    double d = 0;
    for (double v : y) d = std::max(d, std::abs(v - m));
    return d;
  };
  const double fbar = mean(s.f), vbar = mean(s.v);
  const double const_tol = 1e-6 * std::max(1.0, scale);

  if (std::abs(vbar) < const_tol && dev(s.v, 0.0) < const_tol) {
    if (dev(s.f, fbar) < const_tol) {
      return {Family::case_i,
              {{"c", fbar}, {"m", winding}, {"theta0", wrap_pi(s.xi[0])}}};
    }
    // nontrivial f: minimal period from the first significant harmonic
    double amax = 0;
    for (std::size_t j = 1; j < Sf.A.size(); ++j)
      amax = std::max({amax, std::abs(Sf.A[j]), std::abs(Sf.B[j])});
    int k = 0;
    for (std::size_t j = 1; j < Sf.A.size(); ++j)
      if (std::hypot(Sf.A[j], Sf.B[j]) > 1e-8 * amax) {
        k = (int)j;
        break;
      }
    if (k == 0) throw Error(errc::validation, "classify_profile: unclassifiable (flat spectrum)");
    for (std::size_t j = 1; j < Sf.A.size(); ++j)
      if (j % k != 0 && std::hypot(Sf.A[j], Sf.B[j]) > 1e-6 * amax)
        throw Error(errc::validation,
                    "classify_profile: unclassifiable (spectrum not supported on multiples of k)");
    const double theta1 = std::atan2(-Sf.B[k], Sf.A[k]) / k;
    return {Family::case_ii,
            {{"Phi", 2 * M_PI * fbar},
             {"k", k},
             {"m", winding},
             {"theta1", theta1},
             {"theta2", wrap_pi(s.xi[0])}}};
  }

  // v != 0: case_iii requires constant f, v and xi' + 1 == 0
  if (dev(s.f, fbar) > const_tol || dev(s.v, vbar) > const_tol || winding != -1)
    throw Error(errc::validation,
                "classify_profile: unclassifiable (v != 0 with nonconstant profile or winding != -1)");
  double xidev = 0;
  for (int i = 0; i < N; ++i)
    xidev = std::max(xidev, std::abs(winding + Sxi.deriv1(2 * M_PI * i / N) + 1));
  if (xidev > const_tol)
    throw Error(errc::validation, "classify_profile: unclassifiable (xi' + 1 != 0 with v != 0)");
  return {Family::case_iii,
          {{"Psi", 2 * M_PI * fbar}, {"mu", vbar}, {"theta3", wrap_pi(s.xi[0])}}};
}

}  // namespace ssel
