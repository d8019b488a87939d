#include <doctest.h>

#include <cmath>
#include <vector>

#include "ssel/periodic_ode.hpp"

using namespace ssel;

// ---------------------------------------------------------------------------
// Independent oracle: nested bisection on (E, g0) over a plain RK4 integrator
// written here, deliberately separate from the library implementation.

namespace oracle {

struct TM {
  double T, mean;
};

TM orbit(double E, double g0, double h) {
  double g = g0, p = 0, q = 0, t = 0;
  int crossings = 0;
  auto step = [&](double& gg, double& pp, double& qq, double hh) {
    const double k1g = pp, k1p = E - gg * gg;
    const double g2 = gg + 0.5 * hh * k1g, p2 = pp + 0.5 * hh * k1p;
    const double k2g = p2, k2p = E - g2 * g2;
    const double g3 = gg + 0.5 * hh * k2g, p3 = pp + 0.5 * hh * k2p;
    const double k3g = p3, k3p = E - g3 * g3;
    const double g4 = gg + hh * k3g, p4 = pp + hh * k3p;
    const double k4g = p4, k4p = E - g4 * g4;
    qq += hh / 6 * (gg + 2 * g2 + 2 * g3 + g4);
    gg += hh / 6 * (k1g + 2 * k2g + 2 * k3g + k4g);
    pp += hh / 6 * (k1p + 2 * k2p + 2 * k3p + k4p);
  };
  for (long i = 0; i < 100000000; ++i) {
    double gn = g, pn = p, qn = q;
    step(gn, pn, qn, h);
    if (i > 0 && p < 0 && pn >= 0 && crossings == 0) crossings = 1;
    if (i > 0 && p > 0 && pn <= 0 && crossings == 1) {
      double tau = t;
      for (int it = 0; it < 60; ++it) {
        const double dt = -p / (E - g * g);
        step(g, p, q, dt);
        tau += dt;
        if (std::abs(dt) < 1e-16 * std::max(1.0, tau)) break;
      }
      return {tau, q / tau};
    }
    g = gn;
    p = pn;
    q = qn;
    t += h;
  }
  return {-1, 0};
}

struct Sol {
  double E, g0, amplitude;
};

Sol solve(double Phi, int k) {
  const double Ttar = 2 * M_PI / k;
  const double Mtar = 2 + Phi / (2 * M_PI);
  const double h = Ttar * 4e-5;
  auto g0_for_period = [&](double E) {
    double lo = std::sqrt(E) * (1 + 1e-12), hi = 2 * std::sqrt(E) * (1 - 1e-13);
    for (int i = 0; i < 78; ++i) {
      const double mid = 0.5 * (lo + hi);
      const TM tm = orbit(E, mid, h);
      ((tm.T < 0 || tm.T > Ttar) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
  };
  auto mean_at = [&](double E) { return orbit(E, g0_for_period(E), h).mean; };
  double Elo = std::pow(double(k), 4) / 4 * (1 + 1e-10), Ehi = Elo;
  for (int i = 0; i < 60; ++i) {
    Ehi *= 1.35;
    if (mean_at(Ehi) < Mtar) break;
  }
  for (int i = 0; i < 70; ++i) {
    const double Em = 0.5 * (Elo + Ehi);
    (mean_at(Em) > Mtar ? Elo : Ehi) = Em;
  }
  const double E = 0.5 * (Elo + Ehi);
  const double g0 = g0_for_period(E);
  // g_min is the other real root of V(g) = V(g0) below sqrt(E)
  const double H0 = g0 * g0 * g0 / 3 - E * g0;
  double lo = -std::sqrt(E), hi = std::sqrt(E);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((mid * mid * mid / 3 - E * mid) < H0 ? hi : lo) = mid;
  }
  return {E, g0, (g0 - 0.5 * (lo + hi)) / 2};
}

}  // namespace oracle

// ---------------------------------------------------------------------------

TEST_CASE("existence condition") {
  CHECK(existence_condition(0.0, 2));
  CHECK_FALSE(existence_condition(0.0, 1));
  CHECK(existence_condition(5 * M_PI, 3));  // equality boundary
  CHECK_FALSE(existence_condition(5 * M_PI + 0.1, 3));
  CHECK(existence_condition(-8 * M_PI, 2));
  CHECK_THROWS_AS(existence_condition(0.0, 0), Error);
}

TEST_CASE("integrate_orbit") {
  ShootingConfig cfg;

  SUBCASE("center start reports the linearisation period") {
    const double E = 81.0 / 4;
    const OrbitResult o = integrate_orbit(E, std::sqrt(E), cfg);
    CHECK(o.period == doctest::Approx(2 * M_PI / std::pow(4 * E, 0.25)).epsilon(1e-14));
    CHECK(o.mean == doctest::Approx(std::sqrt(E)).epsilon(1e-14));
  }

  SUBCASE("near-center period approaches 2pi/3 at E = 81/4") {
    const double E = 81.0 / 4;
    const OrbitResult o = integrate_orbit(E, std::sqrt(E) + 0.01, cfg);
    CHECK(std::abs(o.period - 2 * M_PI / 3) < 1e-4);
  }

  SUBCASE("small-amplitude limit extrapolates to the linear period") {
    const double E = 7.3;
    const double Tlin = 2 * M_PI / std::pow(4 * E, 0.25);
    const double T1 = integrate_orbit(E, std::sqrt(E) + 1e-3, cfg).period;
    const double T2 = integrate_orbit(E, std::sqrt(E) + 2e-3, cfg).period;
    // period - Tlin scales like amplitude^2: Richardson to zero amplitude
    const double T0 = (4 * T1 - T2) / 3;
    CHECK(T0 == doctest::Approx(Tlin).epsilon(1e-8));
  }

  SUBCASE("hamiltonian conservation along the returned samples") {
    const double E = 30.0, g0 = 1.7 * std::sqrt(E);
    const OrbitResult o = integrate_orbit(E, g0, cfg, 256);
    CHECK(o.energy_drift < 1e-10);
    const double H0 = g0 * g0 * g0 / 3 - E * g0;
    for (std::size_t i = 0; i < o.g.size(); i += 16) {
      const double V = o.g[i] * o.g[i] * o.g[i] / 3 - E * o.g[i];
      CHECK(V <= H0 + 1e-8 * std::abs(H0) + 1e-10);
    }
  }

  SUBCASE("non-periodic energies rejected") {
    CHECK_THROWS_AS(integrate_orbit(4.0, 2 * 2.0, ShootingConfig{}), Error);  // homoclinic
    CHECK_THROWS_AS(integrate_orbit(4.0, -2.5, ShootingConfig{}), Error);     // below the saddle
    CHECK_THROWS_AS(integrate_orbit(-1.0, 1.0, ShootingConfig{}), Error);
  }

  SUBCASE("period invariant under 4x step refinement") {
    ShootingConfig fine = cfg;
    fine.rk_step = cfg.rk_step / 4;
    const double E = 25.0, g0 = 1.5 * std::sqrt(E);
    const double T1 = integrate_orbit(E, g0, cfg).period;
    const double T2 = integrate_orbit(E, g0, fine).period;
    CHECK(std::abs(T1 - T2) / T1 < 1e-10);
  }
}

TEST_CASE("solve_profile") {
  SUBCASE("(0,3): nontrivial, mean zero, minimal period 2pi/3, residual < 1e-8") {
    const ProfileSolution p = solve_profile(0.0, 3);
    CHECK_FALSE(p.degenerate);
    CHECK(p.amplitude > 1.0);
    CHECK(p.residual_sup < 1e-8);
    double mean = 0;
    const int nd = 1024;
    for (int i = 0; i < nd; ++i) mean += p.f(2 * M_PI * i / nd);
    mean *= 2 * M_PI / nd;
    CHECK(std::abs(mean - 0.0) < 1e-10);
    for (std::size_t j = 1; j < p.fourier_cos.size(); ++j)
      if (j % 3 != 0) {
        CHECK(std::abs(p.fourier_cos[j]) < 1e-10);
        CHECK(std::abs(p.fourier_sin[j]) < 1e-10);
      }
    CHECK(std::abs(p.fourier_cos[3]) > 1e-10);
    for (int i = 0; i < 64; ++i) {
      const double th = 2 * M_PI * i / 64;
      CHECK(std::abs(p.f(th + 2 * M_PI / 3) - p.f(th)) < 1e-8);
    }
  }

  SUBCASE("(-8pi,2): mean -4 per unit angle") {
    const ProfileSolution p = solve_profile(-8 * M_PI, 2);
    CHECK_FALSE(p.degenerate);
    CHECK(p.residual_sup < 1e-8);
    double mean = 0;
    const int nd = 2048;
    for (int i = 0; i < nd; ++i) mean += p.f(2 * M_PI * i / nd);
    mean /= nd;
    CHECK(mean == doctest::Approx(-4.0).epsilon(1e-10));
  }

  SUBCASE("(0,1): no existence") { CHECK_THROWS_AS(solve_profile(0.0, 1), Error); }

  SUBCASE("boundary (5pi,3) returns the degenerate constant") {
    const ProfileSolution p = solve_profile(5 * M_PI, 3);
    CHECK(p.degenerate);
    CHECK(p.amplitude == 0.0);
    CHECK(p.f(0.3) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(p.lambda == doctest::Approx(2.5 * 2.5 + 4 * 2.5).epsilon(1e-14));
  }

  SUBCASE("sine coefficients of the sampled orbit are tiny (evenness)") {
    ShootingConfig cfg;
    const ProfileSolution p = solve_profile(M_PI, 3, cfg);
    const OrbitResult orb = integrate_orbit(p.E, p.g0, cfg, 512);
    const int M = (int)orb.g.size();
    for (int j = 1; j <= 12; ++j) {
      double b = 0;
      for (int i = 0; i < M; ++i) b += (orb.g[i] - 2) * std::sin(2 * M_PI * j * i / M);
      CHECK(std::abs(2 * b / M) < 1e-10);
    }
  }

  SUBCASE("fourier tail carries < 1e-10 of the energy") {
    const ProfileSolution p = solve_profile(-8 * M_PI, 2);
    double total = 0, tail = 0;
    const std::size_t q3 = p.fourier_cos.size() * 3 / 4;
    for (std::size_t j = 1; j < p.fourier_cos.size(); ++j) {
      const double e = p.fourier_cos[j] * p.fourier_cos[j] + p.fourier_sin[j] * p.fourier_sin[j];
      total += e;
      if (j >= q3) tail += e;
    }
    CHECK(tail < 1e-10 * total);
  }

  SUBCASE("newton agrees with the nested-bisection oracle") {
    for (const auto& [Phi, k] : std::vector<std::pair<double, int>>{{0.0, 3}, {M_PI, 3}}) {
      const ProfileSolution p = solve_profile(Phi, k);
      const oracle::Sol s = oracle::solve(Phi, k);
      CHECK(std::abs(p.E - s.E) / s.E < 1e-8);
      CHECK(std::abs(p.amplitude - s.amplitude) / s.amplitude < 1e-8);
    }
  }
}

TEST_CASE("compute_C1") {
  SUBCASE("constant profile") {
    // f == c solves with lambda = c^2 + 4c; C1 = ((m+1)^2 - lambda)/2
    const ProfileSolution p = solve_profile(5 * M_PI, 3);  // c = 2.5
    const double c = 2.5;
    for (int m : {-2, 0, 3}) {
      const C1Report r = compute_C1(p, m);
      const double expect = (double(m + 1) * (m + 1) - c * c - 4 * c) / 2;
      CHECK(r.C1_ode == doctest::Approx(expect).epsilon(1e-13));
      CHECK(r.C1_integral_direct == doctest::Approx(expect).epsilon(1e-12));
    }
  }

  SUBCASE("ode and direct-integral values agree on solved profiles") {
    for (const auto& [Phi, k] : std::vector<std::pair<double, int>>{{0.0, 3}, {-8 * M_PI, 2}}) {
      const ProfileSolution p = solve_profile(Phi, k);
      const C1Report r = compute_C1(p, 1);
      CHECK(std::abs(r.C1_ode - r.C1_integral_direct) < 1e-8);
    }
  }

  SUBCASE("printed-coefficient gap equals -Phi/pi") {
    const ProfileSolution p = solve_profile(M_PI, 3);
    const C1Report r = compute_C1(p, 0);
    CHECK(r.C1_paper_printed - r.C1_integral_direct ==
          doctest::Approx(-M_PI / M_PI).epsilon(1e-8));
  }
}

TEST_CASE("scan_existence") {
  ShootingConfig cfg;
  SUBCASE("boundary rows and a solved cell") {
    const auto rows = scan_existence(-M_PI, M_PI, M_PI / 2, 2, cfg);
    for (const auto& r : rows) {
      CHECK(r.exists == (4 + r.Phi / M_PI <= r.k * r.k + 1e-12));
      if (r.Phi == 0.0 && r.k == 2) CHECK(r.solved == "degenerate");
      if (r.Phi == 0.0 && r.k == 1) CHECK(r.solved == "false");
      if (r.Phi == -M_PI && r.k == 2) {
        CHECK(r.solved == "true");
        CHECK(r.residual_sup < 1e-8);
      }
    }
  }
  SUBCASE("csv header is the documented contract") {
    const auto rows = scan_existence(0.0, M_PI, M_PI, 1, cfg);
    const std::string csv = scan_to_csv(rows);
    CHECK(csv.rfind("Phi,k,exists,solved,E,amplitude,residual_sup,C1_ode,C1_integral\n", 0) == 0);
  }
  SUBCASE("bad ranges rejected") {
    CHECK_THROWS_AS(scan_existence(1.0, 0.0, 0.1, 3, cfg), Error);
    CHECK_THROWS_AS(scan_existence(0.0, 1.0, -0.1, 3, cfg), Error);
  }
}
