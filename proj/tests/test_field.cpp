#include <doctest.h>

#include <cmath>
#include <random>

#include "ssel/field.hpp"

using namespace ssel;

TEST_CASE("polar basis") {
  auto [er, et] = polar_basis(0.0);
  CHECK(er[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(er[1] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(et[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(et[1] == doctest::Approx(1.0).epsilon(1e-15));

  auto [er2, et2] = polar_basis(M_PI / 2);
  CHECK(er2[0] == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(er2[1] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(et2[0] == doctest::Approx(-1.0).epsilon(1e-15));

  auto [er3, et3] = polar_basis(M_PI / 4);
  CHECK(er3[0] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(er3[1] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-15));
  CHECK(et3[0] == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-15));
}

TEST_CASE("spherical basis") {
  auto b = spherical_basis(M_PI / 2, 0.0);
  CHECK((b.e_r - Vec(1, 0, 0)).norm() < 1e-15);
  auto b2 = spherical_basis(M_PI / 2, M_PI / 2);
  CHECK((b2.e_r - Vec(0, 1, 0)).norm() < 1e-15);
  CHECK_THROWS_AS(spherical_basis(0.0, 0.3), Error);
  CHECK_THROWS_AS(spherical_basis(M_PI, 0.3), Error);
}

TEST_CASE("frame orthonormality") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ang(0.01, M_PI - 0.01);
  for (int t = 0; t < 200; ++t) {
    const double phi = ang(rng), th = 2 * ang(rng);
    auto b = spherical_basis(phi, th);
    const Vec e[3] = {b.e_r, b.e_phi, b.e_theta};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(e[i].dot(e[j]) - (i == j ? 1.0 : 0.0)) < 1e-14);
    // right-handed
    Vec cr(e[0][1] * e[1][2] - e[0][2] * e[1][1], e[0][2] * e[1][0] - e[0][0] * e[1][2],
           e[0][0] * e[1][1] - e[0][1] * e[1][0]);
    CHECK((cr - e[2]).norm() < 1e-13);

    auto pb = polar_basis(th);
    CHECK(std::abs(pb.e_r.dot(pb.e_theta)) < 1e-14);
    CHECK(std::abs(pb.e_r.norm() - 1) < 1e-14);
  }
}

TEST_CASE("fd derivatives on closed forms") {
  StencilConfig cfg;

  SUBCASE("1/|x| is harmonic in R^3") {
    ScalarField f = [](const Vec& x) { return 1.0 / x.norm(); };
    CHECK(std::abs(fd_laplacian(f, Vec(1, 0, 0), cfg)) < 1e-6);
    CHECK(std::abs(fd_laplacian(f, Vec(0.3, -0.4, 1.1), cfg)) < 1e-6);
  }

  SUBCASE("gradient norm^2 of x/|x| at |x|=2 is 0.5") {
    VectorField d = [](const Vec& x) { return x.normalized(); };
    const Vec x(2.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0));
    const Mat J = fd_jacobian(d, x, cfg);
    CHECK(J.frobenius2() == doctest::Approx(0.5).epsilon(1e-6));
  }

  SUBCASE("constant field has zero gradient exactly") {
    ScalarField f = [](const Vec&) { return 3.25; };
    const Vec g = fd_gradient(f, Vec(0.7, -0.3), cfg);
    CHECK(g[0] == 0.0);
    CHECK(g[1] == 0.0);
  }

  SUBCASE("polynomial exactness to 1e-9 relative") {
    // order 4 differentiates quartics exactly up to roundoff
    ScalarField poly = [](const Vec& x) {
      return 1 + 2 * x[0] + 3 * x[1] * x[1] - x[0] * x[0] * x[1] + 0.5 * x[1] * x[1] * x[1] * x[1];
    };
    const Vec x(1.2, -0.7);
    const Vec g = fd_gradient(poly, x, cfg);
    const double gx = 2 - 2 * x[0] * x[1];
    const double gy = 6 * x[1] - x[0] * x[0] + 2 * x[1] * x[1] * x[1];
    CHECK(g[0] == doctest::Approx(gx).epsilon(1e-9));
    CHECK(g[1] == doctest::Approx(gy).epsilon(1e-9));
    // second derivatives sit on an eps/h^2 roundoff floor at the default
    // step; a coarser stencil is still truncation-exact on quartics
    StencilConfig coarse = cfg;
    coarse.relative_step = 1e-2;
    CHECK(fd_laplacian(poly, x, coarse) ==
          doctest::Approx(-2 * x[1] + 6 + 6 * x[1] * x[1]).epsilon(1e-9));
  }

  SUBCASE("divergence of a curl-free rotation field") {
    VectorField rot = [](const Vec& x) { return Vec(-x[1], x[0]) / x.norm2(); };
    CHECK(std::abs(fd_divergence(rot, Vec(0.8, 1.1), cfg)) < 1e-9);
  }

  SUBCASE("stencil guards") {
    StencilConfig bad;
    bad.relative_step = 0.5;
    ScalarField f = [](const Vec& x) { return x.norm(); };
    CHECK_THROWS_AS(fd_partial(f, Vec(1.0, 0.0), 0, bad), Error);
  }
}

TEST_CASE("annulus grid") {
  SUBCASE("rejects empty radial range") {
    GridSpec g = GridSpec::defaults(2);
    g.r_min = 1.0;
    g.r_max = 1.0;
    CHECK_THROWS_AS(annulus_grid(g, 2), Error);
  }
  SUBCASE("counting") {
    GridSpec g;
    g.r_min = 1;
    g.r_max = 2;
    g.n_radial = 2;
    g.angular = {4};
    CHECK(annulus_grid(g, 2).size() == 8);
  }
  SUBCASE("containment and geometric radii") {
    GridSpec g = GridSpec::defaults(3);
    const auto pts = annulus_grid(g, 3);
    for (const auto& p : pts) {
      CHECK(p.norm() >= g.r_min * (1 - 1e-12));
      CHECK(p.norm() <= g.r_max * (1 + 1e-12));
    }
    CHECK(pts.front().norm() == doctest::Approx(g.r_min));
    CHECK(pts.back().norm() == doctest::Approx(g.r_max));
  }
}

TEST_CASE("sphere quadrature") {
  SUBCASE("surface areas") {
    const Quadrature q2 = sphere_quadrature(2, 32);
    const Quadrature q3 = sphere_quadrature(3, 32);
    const Quadrature q4 = sphere_quadrature(4, 24);
    auto total = [](const Quadrature& q) {
      double s = 0;
      for (double w : q.weights) s += w;
      return s;
    };
    CHECK(total(q2) == doctest::Approx(2 * M_PI).epsilon(1e-12));
    CHECK(total(q3) == doctest::Approx(4 * M_PI).epsilon(1e-12));
    CHECK(total(q4) == doctest::Approx(2 * M_PI * M_PI).epsilon(1e-10));
    for (double w : q3.weights) CHECK(w > 0);
    for (double w : q4.weights) CHECK(w > 0);
  }
  SUBCASE("moment integral on S^2") {
    const Quadrature q3 = sphere_quadrature(3, 24);
    const double I = q3.integrate([](const Vec& x) { return x[2] * x[2]; });
    CHECK(I == doctest::Approx(4 * M_PI / 3).epsilon(1e-10));
  }
  SUBCASE("unsupported dimension") { CHECK_THROWS_AS(sphere_quadrature(5, 8), Error); }
  SUBCASE("nodes on the unit sphere") {
    for (const Vec& x : sphere_quadrature(4, 8).nodes)
      CHECK(std::abs(x.norm() - 1.0) < 1e-14);
  }
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  std::vector<double> x, w;
  gauss_legendre(8, x, w);
  double acc = 0;
  for (int i = 0; i < 8; ++i) acc += w[i] * std::pow(x[i], 10);
  CHECK(acc == doctest::Approx(2.0 / 11).epsilon(1e-13));
}

TEST_CASE("pairwise sum and parallel chunks") {
  std::vector<double> v(10001);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / double(i + 1);
  const double s1 = pairwise_sum(v);
  set_thread_count(4);
  std::vector<double> out(v.size());
  parallel_chunks(v.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = v[i];
  });
  set_thread_count(1);
  CHECK(pairwise_sum(out) == s1);
}
