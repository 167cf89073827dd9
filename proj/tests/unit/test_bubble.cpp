#include "doctest.h"
#include "oracles.hpp"

#include "meanfield/bubble.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/green.hpp"

#include <cmath>
#include <vector>

using namespace meanfield;

TEST_CASE("standard bubble samples") {
  CHECK(bubble_profile(0.0) == 0.0);
  CHECK(bubble_profile(std::sqrt(8 * std::sqrt(6.0))) == doctest::Approx(-4 * std::log(2.0)).epsilon(1e-15));
  auto u = standard_bubble(make_grid(257), 10.0);
  CHECK(u[0] == 0.0);
  for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] < u[i - 1]);
  CHECK(u.grid().node(u.size() - 1) == 1.0);
  CHECK(u[u.size() - 1] == doctest::Approx(bubble_profile(10.0)).epsilon(1e-15));
}

TEST_CASE("standard bubble is the concentrated bubble at eps^2 = 8 sqrt 6") {
  const double eps = std::sqrt(kBubbleScale2);
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double r = 0.05 * k;
    worst = std::max(worst, std::abs(bubble_profile(r) - bubble_u(eps, r)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("bubble derivative matches finite differences") {
  for (double eps : {0.05, 0.3}) {
    for (double r : {0.01, 0.2, 0.9}) {
      const double h = 1e-6 * (eps + r);
      const double fd = (bubble_u(eps, r + h) - bubble_u(eps, r - h)) / (2 * h);
      CHECK(bubble_u_prime(eps, r) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("bubble PDE residual converges at second order") {
  std::vector<double> logh, logr;
  double prev = 1e300;
  for (int n : {257, 513, 1025}) {
    const auto rep = bubble_pde_residual(n, 10.0);
    CHECK(rep.max_residual < prev);
    prev = rep.max_residual;
    logh.push_back(std::log(10.0 / (n - 1)));
    logr.push_back(std::log(rep.max_residual));
  }
  CHECK(oracle::least_squares_slope(logh, logr) >= 1.7);
  const auto wrong = bubble_pde_residual(1025, 10.0, 383.0);
  CHECK(wrong.max_residual > 20 * prev);
  CHECK_THROWS_AS(bubble_pde_residual(32, 10.0), InvalidConfiguration);
}

TEST_CASE("bubble mass closed form") {
  CHECK(bubble_mass(INFINITY) == oracle::critical_mass);
  CHECK(bubble_mass(std::sqrt(kBubbleScale2)) == doctest::Approx(32 * oracle::pi * oracle::pi).epsilon(1e-14));
  CHECK(bubble_mass(0.0) == 0.0);
  CHECK(bubble_mass(1e-4) < 1e-10);
  double prev = 0.0;
  for (double R : {0.5, 1.0, 5.0, 20.0, 100.0, 1e4}) {
    const double m = bubble_mass(R);
    CHECK(m > prev);
    CHECK(m < oracle::critical_mass);
    prev = m;
  }
}

TEST_CASE("bubble mass quadrature agrees with the closed form") {
  for (double R : {1.0, 10.0, 50.0}) {
    const double q = bubble_mass_quadrature(R, 2049);
    CHECK(q == doctest::Approx(bubble_mass(R)).epsilon(1e-8));
  }
  // independent Gauss oracle
  const double oracle_mass = oracle::integrate_graded(
      [](double r) { return 2 * oracle::pi * oracle::pi * r * r * r * std::exp(bubble_profile(r)); }, 0.0,
      50.0, 1.0);
  CHECK(oracle_mass == doctest::Approx(bubble_mass(50.0)).epsilon(1e-12));
}

TEST_CASE("projection correction matches the biharmonic closed form") {
  auto g = make_grid(513);
  for (double eps : {0.3, 0.1, 0.02}) {
    const auto rep = project(eps, g);
    CHECK(rep.closed_form_error <= 1e-10);
    CHECK(std::abs(rep.projected_at_one) <= 1e-10);
    CHECK(std::abs(rep.projected_slope_at_one) <= 1e-8);
    CHECK(rep.correction_residual <= 1e-12);
    CHECK(rep.boundary_slope == doctest::Approx(-8 / (1 + eps * eps)).epsilon(1e-15));
    for (std::size_t i = 0; i < g->size(); i += 64)
      CHECK(rep.correction[i] == doctest::Approx(projection_correction_exact(eps, g->node(i))).epsilon(1e-10));
  }
  CHECK_THROWS_AS(project(0.5, g), InvalidConfiguration);
  CHECK_THROWS_AS(project(0.0, g), InvalidConfiguration);
}

TEST_CASE("projection defect is fourth order in eps") {
  auto g = make_grid(513);
  std::vector<double> le, ld;
  for (double eps : {0.2, 0.1, 0.05, 0.025}) {
    const auto rep = project(eps, g);
    const double ratio = rep.defect / std::pow(eps, 4);
    CHECK(ratio > 1.0);
    CHECK(ratio < 20.0);
    le.push_back(std::log(eps));
    ld.push_back(std::log(rep.defect));
  }
  CHECK(oracle::least_squares_slope(le, ld) >= 3.5);
}

TEST_CASE("defect oracle from the closed forms") {
  // phi - log(gamma eps^4) + 64 pi^2 R(x,0) + eps^2 R1(x,0), all in closed form
  const double eps = 0.05;
  double worst = 0.0;
  for (int k = 0; k <= 100; ++k) {
    const double r = 0.01 * k;
    const double phi = projection_correction_exact(eps, r);
    const double rob = robin(BallPoint::on_axis(r), BallPoint::origin());
    const double d = phi - std::log(384 * std::pow(eps, 4)) + oracle::critical_mass * rob + eps * eps * 4 * (2 - r * r);
    worst = std::max(worst, std::abs(d));
  }
  CHECK(project(eps, make_grid(513)).defect == doctest::Approx(worst).epsilon(1e-6));
}

TEST_CASE("energy of the zero field") {
  auto g = make_grid(129);
  const double rho = oracle::critical_mass;
  CHECK(j_energy(RadialField::zeros(g), rho) == doctest::Approx(-rho * std::log(oracle::pi * oracle::pi / 2)).epsilon(1e-12));
  CHECK(j_energy(RadialField::zeros(g), rho) == doctest::Approx(-1008.31832).epsilon(1e-8));
  CHECK_THROWS_AS(j_energy(RadialField::sample(g, [](double) { return 701.0; }), 1.0), RangeError);
  CHECK_THROWS_AS(j_energy(RadialField::zeros(g), -1.0), InvalidConfiguration);
}

TEST_CASE("energy along a scaled plate profile is finite") {
  auto g = make_grid(129);
  for (double c : {-50.0, -1.0, 0.0, 1.0, 50.0, 300.0}) {
    auto u = RadialField::sample(g, [c](double r) { return c * (1 - r * r) * (1 - r * r); });
    CHECK(std::isfinite(j_energy(u, 100.0)));
  }
}

TEST_CASE("energy derivative matches central differences") {
  auto g = make_grid(257);
  auto u = RadialField::sample(g, [](double r) { return 2 * (1 - r * r) * (1 - r * r) * (1 + r); });
  auto h = RadialField::sample(g, [](double r) { return std::cos(r) * (1 - r * r) * (1 - r * r); });
  const double rho = 200.0, t = 1e-5;
  const double fd = (j_energy(u + h * t, rho) - j_energy(u + h * -t, rho)) / (2 * t);
  CHECK(j_energy_derivative(u, h, rho) == doctest::Approx(fd).epsilon(1e-5));
}

TEST_CASE("energy family dichotomy") {
  const std::vector<double> eps{0.08, 0.04, 0.02, 0.01, 0.005, 0.0025};
  const double m = oracle::critical_mass;
  const auto above = energy_family(1.05 * m, eps);
  for (std::size_t k = 1; k < above.size(); ++k) CHECK(above[k].energy < above[k - 1].energy);
  const auto below = energy_family(0.95 * m, eps);
  CHECK(below.back().energy > below[below.size() - 2].energy);

  const double rho = 0.9 * m;
  const auto mid = energy_family(rho, eps);
  const double slope = family_slope(std::span(mid).subspan(2));
  CHECK(slope == doctest::Approx(4 * (m - rho)).epsilon(0.1));

  CHECK_THROWS_AS(energy_family(rho, std::vector<double>{0.01, 0.02}), InvalidConfiguration);
  CHECK_THROWS_AS(energy_family(rho, std::vector<double>{0.4, 0.2}), InvalidConfiguration);
}

TEST_CASE("library energy agrees with the quadrature oracle") {
  const std::vector<double> eps{0.08, 0.02, 0.005};
  const double rho = 0.9 * oracle::critical_mass;
  const auto fam = energy_family(rho, eps);
  for (std::size_t k = 0; k < eps.size(); ++k) {
    const double ref = oracle::projected_bubble_energy(eps[k], rho);
    CHECK(fam[k].energy == doctest::Approx(ref).epsilon(1e-3));
  }
}
