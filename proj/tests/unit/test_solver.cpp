#include "doctest.h"
#include "oracles.hpp"

#include "meanfield/bubble.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/solver.hpp"

#include <cmath>

using namespace meanfield;

namespace {

double max_abs_diff(const RadialField& a, const RadialField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

const double kHalf = 0.5 * oracle::critical_mass;

} // namespace

TEST_CASE("rho = 0 gives the zero field") {
  auto g = make_grid(65);
  const auto rep = solve_newton(0.0, RadialField::zeros(g));
  CHECK(rep.converged);
  CHECK(rep.iterations <= 1);
  for (double v : rep.field.values()) CHECK(v == 0.0);
  CHECK(std::isinf(rep.mu));
}

TEST_CASE("linear regime") {
  auto g = make_grid(513);
  const auto rep = solve_newton(1.0, RadialField::zeros(g));
  REQUIRE(rep.converged);
  const double linear = 1.0 / (96 * oracle::pi * oracle::pi);
  CHECK(std::abs(rep.max_u - linear) <= 0.02 * linear);
  const auto lin = clamped_solve(RadialField::sample(g, [](double) { return 1.0 / kBallVolume; }));
  CHECK(max_abs_diff(rep.field, lin) < 1e-3 * linear);
}

TEST_CASE("newton at half the critical mass") {
  auto g = make_grid(513);
  const auto rep = solve_newton(kHalf, RadialField::zeros(g));
  REQUIRE(rep.converged);
  CHECK(rep.residual <= 1e-10);
  CHECK(rep.energy < j_energy(RadialField::zeros(g), kHalf));
  CHECK(rep.field[0] == rep.max_u);
  for (std::size_t i = 1; i < g->size(); ++i) CHECK(rep.field[i] < rep.field[i - 1]);
  CHECK(std::abs(rep.field[g->size() - 1]) < 1e-14);
  const double alpha = std::log(integrate_ball(rep.field, 1.0, [](double v) { return std::exp(v); }) / kHalf);
  CHECK(rep.alpha == doctest::Approx(alpha).epsilon(1e-6));
  CHECK(rep.mu == doctest::Approx(std::exp(-(rep.max_u - rep.alpha) / 4)).epsilon(1e-14));
}

TEST_CASE("newton tail is quadratic") {
  auto g = make_grid(257);
  NewtonOptions opt;
  opt.tol = 1e-14;
  const auto rep = solve_newton(0.9 * oracle::critical_mass, RadialField::zeros(g), opt);
  REQUIRE(rep.log.size() >= 3);
  int tail = 0;
  for (std::size_t k = 1; k < rep.log.size(); ++k) {
    const double prev = rep.log[k - 1].residual, cur = rep.log[k].residual;
    if (prev < 1e-3 && cur > 1e-12 && rep.log[k].step == 1.0) {
      CHECK(cur <= 10 * prev * prev);
      ++tail;
    }
  }
  CHECK(tail >= 1);
}

TEST_CASE("minimize agrees with newton and never increases the energy") {
  auto g = make_grid(513);
  const auto newton = solve_newton(kHalf, RadialField::zeros(g));
  const auto mini = minimize(kHalf, RadialField::zeros(g));
  REQUIRE(newton.converged);
  REQUIRE(mini.converged);
  CHECK(max_abs_diff(newton.field, mini.field) <= 10 * 1e-10);
  for (std::size_t k = 1; k < mini.log.size(); ++k) CHECK(mini.log[k].energy <= mini.log[k - 1].energy);
  CHECK(mini.energy <= j_energy(RadialField::zeros(g), kHalf));
  CHECK_THROWS_AS(minimize(oracle::critical_mass, RadialField::zeros(g)), InvalidConfiguration);
  CHECK_THROWS_AS(minimize(0.0, RadialField::zeros(g)), InvalidConfiguration);
}

TEST_CASE("minimize from a projected bubble reaches the same minimizer") {
  auto g = make_grid(513);
  const double rho = 0.9 * oracle::critical_mass;
  const auto from_zero = minimize(rho, RadialField::zeros(g));
  const auto from_bubble = minimize(rho, project(0.2, g).projected);
  REQUIRE(from_zero.converged);
  REQUIRE(from_bubble.converged);
  CHECK(max_abs_diff(from_zero.field, from_bubble.field) < 1e-8);
}

TEST_CASE("energy decreases once the minimizer replaces the input") {
  auto g = make_grid(257);
  const double rho = 0.7 * oracle::critical_mass;
  const auto start = project(0.1, g).projected;
  const auto rep = minimize(rho, start);
  REQUIRE(rep.converged);
  CHECK(rep.energy < j_energy(start, rho));
}

TEST_CASE("residual definitions") {
  auto g = make_grid(129);
  const auto rep = solve_newton(300.0, RadialField::zeros(g));
  REQUIRE(rep.converged);
  const auto G = euler_lagrange_residual(rep.field, 300.0);
  double m = 0.0;
  for (double v : G.values()) m = std::max(m, std::abs(v));
  CHECK(m == doctest::Approx(rep.residual).epsilon(1e-12).scale(1e-16));
  const auto again = evaluate_solution(rep.field, 300.0);
  CHECK(again.energy == rep.energy);
  // pointwise rows carry the eps/h^4 rounding floor
  CHECK(again.raw_residual < 1e-5);
}

TEST_CASE("non-convergence is reported, not thrown") {
  auto g = make_grid(129);
  NewtonOptions opt;
  opt.max_iter = 1;
  const auto rep = solve_newton(300.0, RadialField::zeros(g), opt);
  CHECK_FALSE(rep.converged);
  CHECK_FALSE(rep.message.empty());
  CHECK_THROWS_AS(solve_newton(-1.0, RadialField::zeros(g)), InvalidConfiguration);
  auto bad = RadialField::sample(g, [](double) { return 1.0; });
  CHECK_THROWS_AS(solve_newton(1.0, bad), InvalidConfiguration);
}

TEST_CASE("continuation to half the critical mass") {
  auto g = make_grid(257);
  const auto rep = continuation(g, 0.05 * oracle::critical_mass, kHalf, 8);
  CHECK(rep.status == ContinuationStatus::ReachedTarget);
  REQUIRE(rep.entries.size() >= 9);
  CHECK(rep.entries.back().rho == doctest::Approx(kHalf).epsilon(1e-15));
  for (std::size_t k = 1; k < rep.entries.size(); ++k) {
    const auto& a = rep.entries[k - 1];
    const auto& b = rep.entries[k];
    CHECK(b.rho > a.rho);
    CHECK(b.converged);
    CHECK(b.max_u >= a.max_u);
  }
  // c_rho decreases in rho wherever log int e^u > 0
  for (std::size_t k = 1; k < rep.entries.size(); ++k) CHECK(rep.entries[k].energy < rep.entries[k - 1].energy);
  REQUIRE(rep.last_field.has_value());
  CHECK(rep.last_field->size() == g->size());
}

TEST_CASE("continuation preconditions") {
  auto g = make_grid(65);
  CHECK_THROWS_AS(continuation(g, 200.0, 100.0, 4), InvalidConfiguration);
  CHECK_THROWS_AS(continuation(g, 100.0, 100.0, 4), InvalidConfiguration);
  CHECK_THROWS_AS(continuation(g, 100.0, 700.0, 4), InvalidConfiguration);
  CHECK_THROWS_AS(continuation(g, 100.0, 200.0, 0), InvalidConfiguration);
  CHECK(std::string(to_string(ContinuationStatus::BlowUp)) == "blow_up");
}
