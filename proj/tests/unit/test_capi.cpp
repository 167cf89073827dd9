#include "doctest.h"
#include "oracles.hpp"

#include "meanfield/meanfield.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

namespace {

struct GridDeleter {
  void operator()(mf_grid* g) const { mf_grid_free(g); }
};
struct FieldDeleter {
  void operator()(mf_field* f) const { mf_field_free(f); }
};
using Grid = std::unique_ptr<mf_grid, GridDeleter>;
using Field = std::unique_ptr<mf_field, FieldDeleter>;

Grid grid(int n, double q = 1.0) {
  mf_grid* g = nullptr;
  REQUIRE(mf_grid_create(n, q, &g) == MF_OK);
  return Grid(g);
}

std::vector<double> values(const mf_field* f) {
  std::vector<double> v(mf_field_size(f));
  REQUIRE(mf_field_values(f, v.data(), v.size()) == MF_OK);
  return v;
}

} // namespace

TEST_CASE("status names and version") {
  CHECK(std::string(mf_status_name(MF_OK)) == "ok");
  CHECK(std::string(mf_status_name(MF_ERR_INVALID_CONFIG)) == "invalid_configuration");
  CHECK(std::string(mf_version()).size() > 0);
  CHECK(mf_critical_mass() == oracle::critical_mass);
}

TEST_CASE("errors map to status codes with a message") {
  mf_grid* g = nullptr;
  CHECK(mf_grid_create(4, 1.0, &g) == MF_ERR_INVALID_CONFIG);
  CHECK(g == nullptr);
  CHECK(std::string(mf_last_error()).size() > 0);

  const double x[4] = {0.2, 0, 0, 0};
  double out = 0.0;
  CHECK(mf_green(x, x, &out) == MF_ERR_DOMAIN);
  auto gr = grid(65);
  mf_field* f = nullptr;
  CHECK(mf_r1_solve(x, gr.get(), &f) == MF_ERR_UNSUPPORTED);
  CHECK(mf_field_read_csv("/nonexistent/dir/u.csv", &f) == MF_ERR_IO);

  Field zero;
  {
    mf_field* z = nullptr;
    REQUIRE(mf_field_zeros(gr.get(), &z) == MF_OK);
    zero.reset(z);
  }
  std::vector<double> hot(65, 701.0);
  hot.back() = 0.0;
  mf_field* h = nullptr;
  REQUIRE(mf_field_create(gr.get(), hot.data(), hot.size(), &h) == MF_OK);
  Field hot_field(h);
  CHECK(mf_j_energy(hot_field.get(), 1.0, &out) == MF_ERR_RANGE);
  CHECK(mf_j_energy(zero.get(), 1.0, &out) == MF_OK);
}

TEST_CASE("null arguments are rejected") {
  double out = 0.0;
  CHECK(mf_grid_create(65, 1.0, nullptr) == MF_ERR_NULL_ARGUMENT);
  CHECK(mf_green(nullptr, nullptr, &out) == MF_ERR_NULL_ARGUMENT);
  CHECK(mf_integrate(nullptr, &out) == MF_ERR_NULL_ARGUMENT);
  CHECK(mf_bubble_mass(1.0, nullptr) == MF_ERR_NULL_ARGUMENT);
  CHECK(mf_grid_size(nullptr) == 0);
  mf_grid_free(nullptr);
  mf_field_free(nullptr);
}

TEST_CASE("field handles") {
  auto g = grid(33);
  CHECK(mf_grid_size(g.get()) == 33);
  std::vector<double> v(33);
  std::vector<double> r(33);
  REQUIRE(mf_grid_nodes(g.get(), r.data(), r.size()) == MF_OK);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1 - r[i] * r[i];
  mf_field* f = nullptr;
  CHECK(mf_field_create(g.get(), v.data(), 10, &f) == MF_ERR_INVALID_CONFIG);
  REQUIRE(mf_field_create(g.get(), v.data(), v.size(), &f) == MF_OK);
  Field field(f);
  std::vector<double> small(3);
  CHECK(mf_field_values(field.get(), small.data(), small.size()) == MF_ERR_INVALID_CONFIG);
  CHECK(values(field.get()) == v);

  mf_grid* back = nullptr;
  REQUIRE(mf_field_grid(field.get(), &back) == MF_OK);
  Grid owned(back);
  CHECK(mf_grid_size(owned.get()) == 33);

  mf_field* lap = nullptr;
  REQUIRE(mf_laplacian(field.get(), &lap) == MF_OK);
  Field lap_field(lap);
  for (double x : values(lap_field.get())) CHECK(x == doctest::Approx(-8.0).epsilon(1e-10));
}

TEST_CASE("csv through the C api") {
  auto g = grid(17, 2.0);
  const double origin[4] = {0, 0, 0, 0};
  mf_field* r1 = nullptr;
  REQUIRE(mf_r1_solve(origin, g.get(), &r1) == MF_OK);
  Field f(r1);
  const auto path = (std::filesystem::temp_directory_path() / "meanfield_capi_roundtrip.csv").string();
  REQUIRE(mf_field_write_csv(f.get(), path.c_str()) == MF_OK);
  mf_field* back = nullptr;
  REQUIRE(mf_field_read_csv(path.c_str(), &back) == MF_OK);
  Field b(back);
  CHECK(values(b.get()) == values(f.get()));
  std::remove(path.c_str());
}

TEST_CASE("ball constants") {
  const double origin[4] = {0, 0, 0, 0};
  double v = 0.0;
  REQUIRE(mf_laplacian_robin_diag(origin, 0.0, &v) == MF_OK);
  CHECK(std::abs(v - 1 / (2 * oracle::pi * oracle::pi)) < 1e-8);
  auto g = grid(513);
  REQUIRE(mf_con_value(origin, g.get(), &v) == MF_OK);
  CHECK(std::abs(v - 16) < 1e-6);
  REQUIRE(mf_bubble_mass(INFINITY, &v) == MF_OK);
  CHECK(v == oracle::critical_mass);
  mf_green_bounds b{};
  REQUIRE(mf_green_bound_check(200, 3, &b) == MF_OK);
  CHECK(b.samples == 200);
  CHECK(std::isfinite(b.gradient_constant));
}

TEST_CASE("projection handle") {
  auto g = grid(257);
  mf_projection* p = nullptr;
  CHECK(mf_project(0.4, g.get(), &p) == MF_ERR_INVALID_CONFIG);
  REQUIRE(mf_project(0.05, g.get(), &p) == MF_OK);
  mf_projection_info info{};
  REQUIRE(mf_projection_get_info(p, &info) == MF_OK);
  CHECK(info.eps == 0.05);
  CHECK(info.predicted_order == 4.0);
  CHECK(std::abs(info.projected_at_one) < 1e-10);
  mf_field* u = nullptr;
  REQUIRE(mf_projection_projected(p, &u) == MF_OK);
  Field projected(u);
  mf_projection_free(p);
  double mass = 0.0;
  REQUIRE(mf_local_mass(projected.get(), 100.0, 1.0, &mass) == MF_OK);
  CHECK(mass == 100.0);
}

TEST_CASE("solve and continuation handles") {
  auto g = grid(257);
  mf_solve_report* rep = nullptr;
  CHECK(mf_solve_newton(1.0, nullptr, nullptr, 1e-10, 50, &rep) == MF_ERR_NULL_ARGUMENT);
  CHECK(mf_solve_newton(-1.0, g.get(), nullptr, 1e-10, 50, &rep) == MF_ERR_INVALID_CONFIG);
  REQUIRE(mf_solve_newton(0.5 * oracle::critical_mass, g.get(), nullptr, 1e-10, 50, &rep) == MF_OK);
  mf_solve_summary s{};
  REQUIRE(mf_solve_report_summary(rep, &s) == MF_OK);
  CHECK(s.converged == 1);
  CHECK(s.residual <= 1e-10);
  // entry 0 is the initial state
  CHECK(mf_solve_report_log_size(rep) == static_cast<size_t>(s.iterations) + 1);
  double res = 0, en = 0, step = 0;
  CHECK(mf_solve_report_log(rep, 0, &res, &en, &step) == MF_OK);
  CHECK(mf_solve_report_log(rep, 1000, &res, &en, &step) == MF_ERR_INVALID_CONFIG);
  mf_field* u = nullptr;
  REQUIRE(mf_solve_report_field(rep, &u) == MF_OK);
  Field field(u);
  mf_solve_report_free(rep);

  mf_pohozaev p{};
  REQUIRE(mf_pohozaev_residual(field.get(), 0.5 * oracle::critical_mass, 0.5, &p) == MF_OK);
  CHECK(std::abs(p.residual / p.volume_term) < 1e-3);

  mf_solve_report* mini = nullptr;
  REQUIRE(mf_minimize(0.5 * oracle::critical_mass, nullptr, field.get(), 1e-10, 100, &mini) == MF_OK);
  REQUIRE(mf_solve_report_summary(mini, &s) == MF_OK);
  CHECK(s.converged == 1);
  mf_solve_report_free(mini);

  mf_continuation* c = nullptr;
  CHECK(mf_continuation_run(g.get(), 300, 200, 4, 1e-10, &c) == MF_ERR_INVALID_CONFIG);
  REQUIRE(mf_continuation_run(g.get(), 100, 300, 4, 1e-10, &c) == MF_OK);
  mf_continuation_status st{};
  REQUIRE(mf_continuation_get_status(c, &st) == MF_OK);
  CHECK(st == MF_CONT_REACHED_TARGET);
  CHECK(std::string(mf_continuation_status_name(st)) == "reached_target");
  CHECK(mf_continuation_size(c) == 5);
  CHECK(mf_continuation_solves(c) == 5);
  mf_continuation_entry e{};
  REQUIRE(mf_continuation_entry_at(c, 4, &e) == MF_OK);
  CHECK(e.rho == doctest::Approx(300.0));
  CHECK(e.converged == 1);
  CHECK(mf_continuation_entry_at(c, 5, &e) == MF_ERR_INVALID_CONFIG);
  mf_continuation_free(c);
}

TEST_CASE("rescaling and balance") {
  auto g = grid(2049, 2.0);
  mf_projection* p = nullptr;
  REQUIRE(mf_project(0.02, g.get(), &p) == MF_OK);
  mf_field* u = nullptr;
  REQUIRE(mf_projection_projected(p, &u) == MF_OK);
  Field field(u);
  mf_projection_free(p);
  mf_rescale* rs = nullptr;
  REQUIRE(mf_rescale_extract(field.get(), oracle::critical_mass, 10.0, 101, &rs) == MF_OK);
  CHECK(mf_rescale_size(rs) == 101);
  double alpha = 0, mu = 0, sup = 0;
  REQUIRE(mf_rescale_summary(rs, &alpha, &mu, &sup) == MF_OK);
  CHECK(sup <= 0.05);
  std::vector<double> x(101), a(101), b(101);
  REQUIRE(mf_rescale_samples(rs, x.data(), a.data(), b.data(), 101) == MF_OK);
  CHECK(x.back() == 10.0);
  CHECK(a.front() == 0.0);
  mf_rescale_free(rs);

  const double pts[8] = {0.3, 0, 0, 0, -0.3, 0, 0, 0};
  double out[8] = {};
  REQUIRE(mf_gradient_balance(pts, 2, out) == MF_OK);
  CHECK(std::abs(out[0] + out[4]) < 1e-8);
  CHECK(std::abs(out[0]) > 1e-3);
}
