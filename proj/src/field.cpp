#include "ssel/field.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace ssel {

PolarBasis polar_basis(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  return {Vec(c, s), Vec(-s, c)};
}

SphericalBasis spherical_basis(double phi, double theta) {
  if (!(phi > 0.0 && phi < M_PI))
    throw Error(errc::validation, "spherical_basis: degenerate pole, phi must lie in (0,pi)");
  const double sp = std::sin(phi), cp = std::cos(phi);
  const double st = std::sin(theta), ct = std::cos(theta);
  return {Vec(sp * ct, sp * st, cp), Vec(cp * ct, cp * st, -sp), Vec(-st, ct, 0.0)};
}

// ---------------------------------------------------------------------------

namespace {

double stencil_step(const Vec& x, const StencilConfig& cfg) {
  cfg.validate();
  const double r = x.norm();
  if (r <= 0.0) throw Error(errc::validation, "fd stencil at the origin");
  const double h = cfg.relative_step * r;
  if (r <= cfg.order * h)
    throw Error(errc::validation, "fd stencil hits the origin");
  return h;
}

}  // namespace

double fd_partial(const ScalarField& f, const Vec& x, int axis, const StencilConfig& cfg) {
  const double h = stencil_step(x, cfg);
  const Vec e = Vec::unit(x.dim(), axis);
  if (cfg.order == 2) return (f(x + h * e) - f(x - h * e)) / (2 * h);
  return (-f(x + 2 * h * e) + 8 * f(x + h * e) - 8 * f(x - h * e) + f(x - 2 * h * e)) / (12 * h);
}

Vec fd_gradient(const ScalarField& f, const Vec& x, const StencilConfig& cfg) {
  Vec g(x.dim());
  for (int j = 0; j < x.dim(); ++j) g[j] = fd_partial(f, x, j, cfg);
  return g;
}

double fd_laplacian(const ScalarField& f, const Vec& x, const StencilConfig& cfg) {
  const double h = stencil_step(x, cfg);
  const double f0 = f(x);
  double lap = 0;
  for (int j = 0; j < x.dim(); ++j) {
    const Vec e = Vec::unit(x.dim(), j);
    if (cfg.order == 2) {
      lap += (f(x + h * e) - 2 * f0 + f(x - h * e)) / (h * h);
    } else {
      lap += (-f(x + 2 * h * e) + 16 * f(x + h * e) - 30 * f0 + 16 * f(x - h * e) -
              f(x - 2 * h * e)) /
             (12 * h * h);
    }
  }
  return lap;
}

Mat fd_jacobian(const VectorField& F, const Vec& x, const StencilConfig& cfg) {
  const double h = stencil_step(x, cfg);
  Mat J(x.dim());
  for (int j = 0; j < x.dim(); ++j) {
    const Vec e = Vec::unit(x.dim(), j);
    Vec col(x.dim());
    if (cfg.order == 2) {
      col = (F(x + h * e) - F(x - h * e)) / (2 * h);
    } else {
      col = (-1.0 * F(x + 2 * h * e) + 8 * F(x + h * e) - 8 * F(x - h * e) + F(x - 2 * h * e)) /
            (12 * h);
    }
    for (int i = 0; i < x.dim(); ++i) J(i, j) = col[i];
  }
  return J;
}

Vec fd_vector_laplacian(const VectorField& F, const Vec& x, const StencilConfig& cfg) {
  const double h = stencil_step(x, cfg);
  const Vec F0 = F(x);
  Vec lap(x.dim());
  for (int j = 0; j < x.dim(); ++j) {
    const Vec e = Vec::unit(x.dim(), j);
    if (cfg.order == 2) {
      lap += (F(x + h * e) - 2.0 * F0 + F(x - h * e)) / (h * h);
    } else {
      lap += (-1.0 * F(x + 2 * h * e) + 16 * F(x + h * e) - 30.0 * F0 + 16 * F(x - h * e) -
              F(x - 2 * h * e)) /
             (12 * h * h);
    }
  }
  return lap;
}

double fd_divergence(const VectorField& F, const Vec& x, const StencilConfig& cfg) {
  const double h = stencil_step(x, cfg);
  double div = 0;
  for (int j = 0; j < x.dim(); ++j) {
    const Vec e = Vec::unit(x.dim(), j);
    if (cfg.order == 2) {
      div += (F(x + h * e)[j] - F(x - h * e)[j]) / (2 * h);
    } else {
      div += (-F(x + 2 * h * e)[j] + 8 * F(x + h * e)[j] - 8 * F(x - h * e)[j] +
              F(x - 2 * h * e)[j]) /
             (12 * h);
    }
  }
  return div;
}

// ---------------------------------------------------------------------------

GridSpec GridSpec::defaults(int dim) {
  GridSpec g;
  switch (dim) {
    case 2: g.angular = {64}; break;
    case 3: g.angular = {16, 32}; break;
    case 4: g.angular = {8, 8, 16}; break;
    default: throw Error(errc::validation, "grid defaults support n in {2,3,4}");
  }
  return g;
}

void GridSpec::validate(int dim) const {
  if (dim < 2 || dim > 4) throw Error(errc::validation, "grid dimension must be 2, 3, or 4");
  if (!(r_min > 0.0 && r_max > r_min))
    throw Error(errc::validation, "invalid grid: need 0 < r_min < r_max");
  if (n_radial < 2) throw Error(errc::validation, "invalid grid: n_radial >= 2");
  if ((int)angular.size() != dim - 1)
    throw Error(errc::validation, "invalid grid: need dim-1 angular resolutions");
  for (int a : angular)
    if (a < 2) throw Error(errc::validation, "invalid grid: angular resolution >= 2");
}

std::vector<Vec> annulus_grid(const GridSpec& spec, int dim) {
  spec.validate(dim);
  std::vector<double> radii(spec.n_radial);
  const double q = spec.r_max / spec.r_min;
  for (int i = 0; i < spec.n_radial; ++i)
    radii[i] = spec.r_min * std::pow(q, double(i) / (spec.n_radial - 1));

  std::vector<Vec> pts;
  if (dim == 2) {
    const int nt = spec.angular[0];
    pts.reserve(radii.size() * nt);
    for (double r : radii)
      for (int j = 0; j < nt; ++j) {
        const double th = 2 * M_PI * j / nt;
        pts.emplace_back(r * std::cos(th), r * std::sin(th));
      }
  } else if (dim == 3) {
    const int np = spec.angular[0], nt = spec.angular[1];
    pts.reserve(radii.size() * np * nt);
    for (double r : radii)
      for (int i = 0; i < np; ++i) {
        const double phi = M_PI * (i + 0.5) / np;  // interior, avoids poles
        for (int j = 0; j < nt; ++j) {
          const double th = 2 * M_PI * j / nt;
          pts.emplace_back(r * std::sin(phi) * std::cos(th), r * std::sin(phi) * std::sin(th),
                           r * std::cos(phi));
        }
      }
  } else {
    const int ns = spec.angular[0], np = spec.angular[1], nt = spec.angular[2];
    pts.reserve(radii.size() * ns * np * nt);
    for (double r : radii)
      for (int l = 0; l < ns; ++l) {
        const double psi = M_PI * (l + 0.5) / ns;
        for (int i = 0; i < np; ++i) {
          const double phi = M_PI * (i + 0.5) / np;
          for (int j = 0; j < nt; ++j) {
            const double th = 2 * M_PI * j / nt;
            pts.emplace_back(r * std::sin(psi) * std::sin(phi) * std::cos(th),
                             r * std::sin(psi) * std::sin(phi) * std::sin(th),
                             r * std::sin(psi) * std::cos(phi), r * std::cos(psi));
          }
        }
      }
  }
  return pts;
}

// ---------------------------------------------------------------------------

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton from the Chebyshev estimate
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 0; k < n; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * k + 1) * x * p1 - k * p2) / (k + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[n - 1 - i] = x;
    weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

double sphere_area(int dim) {
  switch (dim) {
    case 2: return 2 * M_PI;
    case 3: return 4 * M_PI;
    case 4: return 2 * M_PI * M_PI;
    default: throw Error(errc::validation, "sphere_area supports n in {2,3,4}");
  }
}

Quadrature sphere_quadrature(int dim, int resolution) {
  if (dim < 2 || dim > 4)
    throw Error(errc::validation, "sphere_quadrature: unsupported dimension (n in {2,3,4})");
  if (resolution < 2) throw Error(errc::validation, "sphere_quadrature: resolution >= 2");

  Quadrature q;
  q.dim = dim;
  if (dim == 2) {
    const int m = 4 * resolution;
    const double w = 2 * M_PI / m;
    for (int j = 0; j < m; ++j) {
      const double th = 2 * M_PI * j / m;
      q.nodes.emplace_back(std::cos(th), std::sin(th));
      q.weights.push_back(w);
    }
  } else if (dim == 3) {
    std::vector<double> t, wt;
    gauss_legendre(resolution, t, wt);
    const int m = 2 * resolution;
    const double wth = 2 * M_PI / m;
    for (int i = 0; i < resolution; ++i) {
      const double sp = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
      for (int j = 0; j < m; ++j) {
        const double th = 2 * M_PI * j / m;
        q.nodes.emplace_back(sp * std::cos(th), sp * std::sin(th), t[i]);
        q.weights.push_back(wt[i] * wth);
      }
    }
  } else {
    // x = (sin psi sin phi cos th, sin psi sin phi sin th, sin psi cos phi, cos psi)
    // dsigma = sin^2(psi) sin(phi) dpsi dphi dth
    std::vector<double> gp, gw;
    gauss_legendre(resolution, gp, gw);
    std::vector<double> t = gp, wt = gw;  // t = cos(phi) on [-1,1]
    const int m = 2 * resolution;
    const double wth = 2 * M_PI / m;
    for (int l = 0; l < resolution; ++l) {
      const double psi = M_PI * (gp[l] + 1) / 2;  // GL mapped to (0,pi)
      const double wpsi = gw[l] * (M_PI / 2) * std::sin(psi) * std::sin(psi);
      for (int i = 0; i < resolution; ++i) {
        const double sphi = std::sqrt(std::max(0.0, 1.0 - t[i] * t[i]));
        for (int j = 0; j < m; ++j) {
          const double th = 2 * M_PI * j / m;
          q.nodes.emplace_back(std::sin(psi) * sphi * std::cos(th),
                               std::sin(psi) * sphi * std::sin(th), std::sin(psi) * t[i],
                               std::cos(psi));
          q.weights.push_back(wpsi * wt[i] * wth);
        }
      }
    }
  }
  return q;
}

double Quadrature::integrate(const ScalarField& f) const {
  std::vector<double> vals(nodes.size());
  parallel_chunks(nodes.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) vals[i] = weights[i] * f(nodes[i]);
  });
  return pairwise_sum(vals);
}

double Quadrature::integrate_radius(const ScalarField& f, double r) const {
  std::vector<double> vals(nodes.size());
  const double scale = std::pow(r, dim - 1);
  parallel_chunks(nodes.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) vals[i] = scale * weights[i] * f(r * nodes[i]);
  });
  return pairwise_sum(vals);
}

// ---------------------------------------------------------------------------

namespace {
std::atomic<int> g_threads{1};
}

void set_thread_count(int n) { g_threads = std::max(1, n); }
int thread_count() { return g_threads; }

void parallel_chunks(std::size_t n_items,
                     const std::function<void(std::size_t, std::size_t)>& run_chunk) {
  const int nt = thread_count();
  if (nt <= 1 || n_items < 256) {
    run_chunk(0, n_items);
    return;
  }
  const std::size_t chunk = 256;  // fixed regardless of thread count
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(chunk);
      if (b >= n_items) return;
      run_chunk(b, std::min(b + chunk, n_items));
    }
  };
  std::vector<std::thread> pool;
  for (int i = 1; i < nt; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

double pairwise_sum(const std::vector<double>& v) {
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t b, std::size_t e) -> double {
    if (e - b <= 8) {
      double s = 0;
      for (std::size_t i = b; i < e; ++i) s += v[i];
      return s;
    }
    const std::size_t mid = b + (e - b) / 2;
    return rec(b, mid) + rec(mid, e);
  };
  return v.empty() ? 0.0 : rec(0, v.size());
}

}  // namespace ssel
