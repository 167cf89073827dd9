#include "doctest.h"
#include "oracles.hpp"

#include "meanfield/errors.hpp"
#include "meanfield/green.hpp"

#include <cmath>
#include <random>

using namespace meanfield;

namespace {

BallPoint random_point(std::mt19937_64& rng, double max_radius) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  Vec4 v{gauss(rng), gauss(rng), gauss(rng), gauss(rng)};
  const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3]);
  const double r = max_radius * std::pow(unif(rng), 0.25);
  for (double& c : v) c *= r / len;
  return BallPoint(v);
}

} // namespace

TEST_CASE("boggio modulus examples") {
  CHECK(boggio_modulus(BallPoint::on_axis(0.5), BallPoint::origin()) == doctest::Approx(2.0).epsilon(1e-15));
  const BallPoint boundary(Vec4{0.6, 0.0, 0.8, 0.0});
  CHECK(boggio_modulus(boundary, BallPoint::on_axis(0.3)) == doctest::Approx(1.0).epsilon(1e-15));
  std::mt19937_64 rng(7);
  for (int k = 0; k < 200; ++k) {
    const BallPoint x = random_point(rng, 1.0), y = random_point(rng, 1.0);
    const double a = boggio_modulus(x, y);
    CHECK(a >= 1.0);
    CHECK(a == boggio_modulus(y, x));
  }
  CHECK_THROWS_AS(boggio_modulus(BallPoint::on_axis(0.2), BallPoint::on_axis(0.2)), DomainError);
}

TEST_CASE("green examples") {
  const double expected = (std::log(2.0) + 0.125 - 0.5) / (8 * oracle::pi * oracle::pi);
  CHECK(green(BallPoint::on_axis(0.5), BallPoint::origin()) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(green(BallPoint::on_axis(1.0), BallPoint::on_axis(0.4)) == 0.0);
  CHECK_THROWS_AS(green(BallPoint::origin(), BallPoint::origin()), DomainError);
}

TEST_CASE("green matches the radial closed form at the centre") {
  double worst = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double r = 0.0099 * k;
    worst = std::max(worst, std::abs(green(BallPoint::on_axis(r), BallPoint::origin()) - oracle::green_at_origin(r)));
  }
  CHECK(worst <= 1e-14);
  for (int k = 1; k <= 9; ++k) {
    const double r = 0.1 * k;
    CHECK(std::abs(green(BallPoint::on_axis(r), BallPoint::origin()) - oracle::green_at_origin(r)) <= 1e-14);
  }
}

TEST_CASE("green is symmetric and non-negative") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const BallPoint x = random_point(rng, 1.0), y = random_point(rng, 1.0);
    const double g = green(x, y);
    CHECK(g >= 0.0);
    CHECK(g == green(y, x));
  }
}

TEST_CASE("robin at the centre") {
  for (double r : {0.0, 0.1, 0.37, 0.8, 0.999}) {
    const double expected = (r * r / 2 - 0.5) / (8 * oracle::pi * oracle::pi);
    CHECK(robin(BallPoint::on_axis(r), BallPoint::origin()) == doctest::Approx(expected).epsilon(1e-13));
  }
  CHECK(robin(BallPoint::origin(), BallPoint::origin()) ==
        doctest::Approx(-1.0 / (16 * oracle::pi * oracle::pi)).epsilon(1e-15));
}

TEST_CASE("robin diagonal is largest at the centre") {
  const double centre = robin(BallPoint::origin(), BallPoint::origin());
  double prev = centre;
  for (int k = 1; k < 100; ++k) {
    const BallPoint y = BallPoint::on_axis(0.0099 * k);
    const double v = robin(y, y);
    CHECK(v < centre);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("robin is continuous through the diagonal") {
  const BallPoint y(Vec4{0.2, -0.1, 0.3, 0.05});
  const double diag = robin(y, y);
  double prev = 1e300;
  for (double d : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double gap = std::abs(robin(y.shifted(1, d), y) - diag);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-6);
}

TEST_CASE("laplacian of the robin diagonal") {
  const double expected = 1.0 / (2 * oracle::pi * oracle::pi);
  CHECK(std::abs(laplacian_robin_diag(BallPoint::origin()) - expected) < 1e-8);
  // the closed form R(x,0) has constant Laplacian; check off the diagonal via FD
  const double h = 1e-3;
  for (double r : {0.1, 0.5}) {
    const BallPoint x = BallPoint::on_axis(r);
    double lap = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      lap += (robin(x.shifted(k, h), BallPoint::origin()) - 2 * robin(x, BallPoint::origin()) +
              robin(x.shifted(k, -h), BallPoint::origin())) /
             (h * h);
    CHECK(lap == doctest::Approx(expected).epsilon(1e-6));
  }
  // extrapolated values agree across steps down to rounding
  const BallPoint y = BallPoint::on_axis(0.3);
  const double l4 = laplacian_robin_diag(y, 4e-2), l2 = laplacian_robin_diag(y, 2e-2),
               l1 = laplacian_robin_diag(y, 1e-2);
  CHECK(std::abs(l4 - l1) < 1e-9);
  CHECK(std::abs(l2 - l1) < 1e-9);
  CHECK(l1 > 0.0);
  CHECK_THROWS_AS(laplacian_robin_diag(BallPoint::on_axis(0.995)), DomainError);
}

TEST_CASE("r1 and the attainment condition") {
  auto g = make_grid(513);
  auto r1 = r1_solve(BallPoint::origin(), g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double r = g->node(i);
    CHECK(r1[i] == doctest::Approx(4 * (2 - r * r)).epsilon(1e-10));
  }
  CHECK(std::abs(r1[0] - 8.0) < 1e-8);
  CHECK(std::abs(r1[g->size() - 1] - 4.0) < 1e-12);
  const auto slope = radial_derivative(r1);
  CHECK(slope[g->size() - 1] == doctest::Approx(-8.0).epsilon(1e-8));
  CHECK_THROWS_AS(r1_solve(BallPoint::on_axis(0.1), g), Unsupported);

  double first = 0.0;
  for (int n : {257, 513, 1025}) {
    const double c = con_value(BallPoint::origin(), make_grid(n));
    CHECK(std::abs(c - 16.0) < 1e-6);
    if (n == 257) first = c;
    CHECK(std::abs(c - first) < 1e-6);
  }
}

TEST_CASE("narrow bump reproduces the green function") {
  auto g = make_grid(1025, 2.0);
  double prev = 1e300 * 3;
  for (double d : {0.08, 0.04, 0.02}) {
    auto bump = RadialField::sample(g, [d](double r) { return std::exp(-(r / d) * (r / d)); });
    bump = bump * (1.0 / integrate(bump));
    auto u = clamped_solve(bump);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->node(i);
      if (r < 0.3) continue;
      err = std::max(err, std::abs(u[i] - oracle::green_at_origin(r)));
    }
    // second moment of the bump: error O(d^2)
    CHECK(err < prev / 3);
    prev = err;
  }
  CHECK(prev < 5e-5);
}

TEST_CASE("green bound constants are finite and stable") {
  const auto small = green_bound_check(sample_pairs(400, 1));
  const auto large = green_bound_check(sample_pairs(800, 2));
  for (const auto* rep : {&small, &large}) {
    CHECK(std::isfinite(rep->log_constant));
    CHECK(std::isfinite(rep->gradient_constant));
    CHECK(std::isfinite(rep->hessian_constant));
    CHECK(rep->min_distance >= 1e-6);
    CHECK(rep->max_distance <= 1.0);
  }
  CHECK(large.log_constant == doctest::Approx(small.log_constant).epsilon(0.25));
  CHECK(large.gradient_constant == doctest::Approx(small.gradient_constant).epsilon(0.25));
  const BallPoint edge(Vec4{0.0, 1.0, 0.0, 0.0});
  CHECK(green(edge, BallPoint::on_axis(0.5)) == 0.0);
}

TEST_CASE("ball points are validated") {
  CHECK_THROWS_AS(BallPoint(Vec4{1.0, 0.1, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(BallPoint(Vec4{NAN, 0.0, 0.0, 0.0}), DomainError);
  CHECK_NOTHROW(BallPoint(Vec4{1.0 + 1e-13, 0.0, 0.0, 0.0}));
}
