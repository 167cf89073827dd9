#include "meanfield/meanfield.h"

#include "meanfield/bubble.hpp"
#include "meanfield/diagnostics.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/field_io.hpp"
#include "meanfield/green.hpp"
#include "meanfield/radial.hpp"
#include "meanfield/solver.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <new>
#include <string>
#include <vector>

#ifndef MEANFIELD_VERSION
#define MEANFIELD_VERSION "0.0.0"
#endif

namespace mf = meanfield;

struct mf_grid {
  mf::GridPtr grid;
};

struct mf_field {
  mf::RadialField field;
};

struct mf_projection {
  mf::ProjectionReport report;
};

struct mf_solve_report {
  mf::SolveReport report;
};

struct mf_continuation {
  mf::ContinuationReport report;
};

struct mf_rescale {
  mf::RescaleReport report;
};

namespace {

thread_local std::string g_last_error;

mf_status fail(mf_status s, const char* what) {
  g_last_error = what;
  return s;
}

struct NullArgument : mf::Error {
  using mf::Error::Error;
};

template <class... P>
void require(const P*... ptrs) {
  if (((ptrs == nullptr) || ...)) throw NullArgument("null argument");
}

mf_status translate(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const NullArgument& e) {
    return fail(MF_ERR_NULL_ARGUMENT, e.what());
  } catch (const mf::InvalidConfiguration& e) {
    return fail(MF_ERR_INVALID_CONFIG, e.what());
  } catch (const mf::DomainError& e) {
    return fail(MF_ERR_DOMAIN, e.what());
  } catch (const mf::SingularMatrix& e) {
    return fail(MF_ERR_SINGULAR, e.what());
  } catch (const mf::RangeError& e) {
    return fail(MF_ERR_RANGE, e.what());
  } catch (const mf::Unsupported& e) {
    return fail(MF_ERR_UNSUPPORTED, e.what());
  } catch (const mf::IoError& e) {
    return fail(MF_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(MF_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MF_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MF_ERR_INTERNAL, "unknown error");
  }
}

// Runs body, mapping any exception onto a status code; nothing escapes.
template <class F>
mf_status run(F&& body) {
  try {
    body();
  } catch (...) {
    return translate(std::current_exception());
  }
  g_last_error.clear();
  return MF_OK;
}

mf::BallPoint point(const double* x) {
  require(x);
  return mf::BallPoint(mf::Vec4{x[0], x[1], x[2], x[3]});
}

mf_field* wrap(mf::RadialField f) { return new mf_field{std::move(f)}; }

void copy_out(std::span<const double> src, double* dst, size_t len) {
  require(dst);
  if (len < src.size())
    throw mf::InvalidConfiguration("output buffer holds " + std::to_string(len) + " values, need " +
                                   std::to_string(src.size()));
  std::copy(src.begin(), src.end(), dst);
}

} // namespace

extern "C" {

const char* mf_last_error(void) { return g_last_error.c_str(); }

const char* mf_status_name(mf_status status) {
  switch (status) {
  case MF_OK: return "ok";
  case MF_ERR_INVALID_CONFIG: return "invalid_configuration";
  case MF_ERR_DOMAIN: return "domain_error";
  case MF_ERR_SINGULAR: return "singular_matrix";
  case MF_ERR_RANGE: return "range_error";
  case MF_ERR_UNSUPPORTED: return "unsupported";
  case MF_ERR_IO: return "io_error";
  case MF_ERR_NULL_ARGUMENT: return "null_argument";
  case MF_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* mf_version(void) { return MEANFIELD_VERSION; }

double mf_critical_mass(void) { return mf::kCriticalMass; }

mf_status mf_grid_create(int n, double q, mf_grid** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(out);
    *out = new mf_grid{mf::make_grid(n, q)};
  });
}

void mf_grid_free(mf_grid* grid) { delete grid; }

size_t mf_grid_size(const mf_grid* grid) { return grid ? grid->grid->size() : 0; }

mf_status mf_grid_nodes(const mf_grid* grid, double* out, size_t len) {
  return run([&] {
    require(grid);
    copy_out(grid->grid->nodes(), out, len);
  });
}

mf_status mf_grid_weights(const mf_grid* grid, double* out, size_t len) {
  return run([&] {
    require(grid);
    copy_out(grid->grid->weights(), out, len);
  });
}

mf_status mf_field_create(const mf_grid* grid, const double* values, size_t len, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(grid, values, out);
    *out = wrap(mf::RadialField(grid->grid, std::vector<double>(values, values + len)));
  });
}

mf_status mf_field_zeros(const mf_grid* grid, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(grid, out);
    *out = wrap(mf::RadialField::zeros(grid->grid));
  });
}

void mf_field_free(mf_field* field) { delete field; }

size_t mf_field_size(const mf_field* field) { return field ? field->field.size() : 0; }

mf_status mf_field_values(const mf_field* field, double* out, size_t len) {
  return run([&] {
    require(field);
    copy_out(field->field.values(), out, len);
  });
}

mf_status mf_field_nodes(const mf_field* field, double* out, size_t len) {
  return run([&] {
    require(field);
    copy_out(field->field.grid().nodes(), out, len);
  });
}

mf_status mf_field_grid(const mf_field* field, mf_grid** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(field, out);
    *out = new mf_grid{field->field.grid_ptr()};
  });
}

mf_status mf_field_read_csv(const char* path, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(path, out);
    *out = wrap(mf::read_field_csv_file(path));
  });
}

mf_status mf_field_write_csv(const mf_field* field, const char* path) {
  return run([&] {
    require(field, path);
    mf::write_field_csv_file(path, field->field);
  });
}

mf_status mf_laplacian(const mf_field* u, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(u, out);
    *out = wrap(mf::laplacian(u->field));
  });
}

mf_status mf_bilaplacian(const mf_field* u, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(u, out);
    *out = wrap(mf::bilaplacian(u->field));
  });
}

mf_status mf_integrate(const mf_field* u, double* out) {
  return run([&] {
    require(u, out);
    *out = mf::integrate(u->field);
  });
}

mf_status mf_clamped_solve(const mf_field* f, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(f, out);
    *out = wrap(mf::clamped_solve(f->field));
  });
}

mf_status mf_boggio_modulus(const double x[4], const double y[4], double* out) {
  return run([&] {
    require(out);
    *out = mf::boggio_modulus(point(x), point(y));
  });
}

mf_status mf_green(const double x[4], const double y[4], double* out) {
  return run([&] {
    require(out);
    *out = mf::green(point(x), point(y));
  });
}

mf_status mf_robin(const double x[4], const double y[4], double* out) {
  return run([&] {
    require(out);
    *out = mf::robin(point(x), point(y));
  });
}

mf_status mf_laplacian_robin_diag(const double y[4], double h, double* out) {
  return run([&] {
    require(out);
    *out = h > 0.0 ? mf::laplacian_robin_diag(point(y), h) : mf::laplacian_robin_diag(point(y));
  });
}

mf_status mf_r1_solve(const double p[4], const mf_grid* grid, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(grid, out);
    *out = wrap(mf::r1_solve(point(p), grid->grid));
  });
}

mf_status mf_con_value(const double q[4], const mf_grid* grid, double* out) {
  return run([&] {
    require(grid, out);
    *out = mf::con_value(point(q), grid->grid);
  });
}

mf_status mf_green_bound_check(size_t samples, uint64_t seed, mf_green_bounds* out) {
  return run([&] {
    require(out);
    const auto rep = mf::green_bound_check(mf::sample_pairs(samples, seed));
    *out = {rep.samples, rep.min_distance, rep.max_distance, rep.log_constant, rep.gradient_constant,
            rep.hessian_constant};
  });
}

mf_status mf_standard_bubble(const mf_grid* grid, double scale, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(grid, out);
    *out = wrap(mf::standard_bubble(grid->grid, scale));
  });
}

mf_status mf_bubble_pde_residual(int n, double R, double gamma, double* out) {
  return run([&] {
    require(out);
    *out = mf::bubble_pde_residual(n, R, gamma).max_residual;
  });
}

mf_status mf_bubble_mass(double R, double* out) {
  return run([&] {
    require(out);
    *out = mf::bubble_mass(R);
  });
}

mf_status mf_bubble_mass_quadrature(double R, int n, double* out) {
  return run([&] {
    require(out);
    *out = mf::bubble_mass_quadrature(R, n);
  });
}

mf_status mf_project(double eps, const mf_grid* grid, mf_projection** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(grid, out);
    *out = new mf_projection{mf::project(eps, grid->grid)};
  });
}

void mf_projection_free(mf_projection* p) { delete p; }

mf_status mf_projection_get_info(const mf_projection* p, mf_projection_info* out) {
  return run([&] {
    require(p, out);
    const auto& r = p->report;
    *out = {r.eps,       r.boundary_value,      r.boundary_slope,   r.defect,
            r.predicted_order, r.closed_form_error, r.correction_residual, r.projected_at_one,
            r.projected_slope_at_one};
  });
}

mf_status mf_projection_projected(const mf_projection* p, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(p, out);
    *out = wrap(p->report.projected);
  });
}

mf_status mf_projection_correction(const mf_projection* p, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(p, out);
    *out = wrap(p->report.correction);
  });
}

mf_status mf_j_energy(const mf_field* u, double rho, double* out) {
  return run([&] {
    require(u, out);
    *out = mf::j_energy(u->field, rho);
  });
}

mf_status mf_energy_family(double rho, const double* eps, size_t count, const mf_grid* grid, double* energies) {
  return run([&] {
    require(eps, energies);
    const auto fam = mf::energy_family(rho, std::span<const double>(eps, count), grid ? grid->grid : nullptr);
    for (size_t k = 0; k < fam.size(); ++k) energies[k] = fam[k].energy;
  });
}

namespace {

mf::RadialField initial_field(const mf_grid* grid, const mf_field* init) {
  if (init) return init->field;
  require(grid);
  return mf::RadialField::zeros(grid->grid);
}

} // namespace

mf_status mf_solve_newton(double rho, const mf_grid* grid, const mf_field* init, double tol, int max_iter,
                          mf_solve_report** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(out);
    mf::NewtonOptions opt;
    if (tol > 0.0) opt.tol = tol;
    if (max_iter > 0) opt.max_iter = max_iter;
    *out = new mf_solve_report{mf::solve_newton(rho, initial_field(grid, init), opt)};
  });
}

mf_status mf_minimize(double rho, const mf_grid* grid, const mf_field* init, double tol, int max_iter,
                      mf_solve_report** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(out);
    mf::MinimizeOptions opt;
    if (tol > 0.0) opt.tol = tol;
    if (max_iter > 0) opt.max_iter = max_iter;
    *out = new mf_solve_report{mf::minimize(rho, initial_field(grid, init), opt)};
  });
}

void mf_solve_report_free(mf_solve_report* r) { delete r; }

mf_status mf_solve_report_summary(const mf_solve_report* r, mf_solve_summary* out) {
  return run([&] {
    require(r, out);
    const auto& s = r->report;
    *out = {s.rho, s.energy, s.max_u, s.alpha, s.mu, s.residual, s.raw_residual, s.iterations, s.converged ? 1 : 0};
  });
}

mf_status mf_solve_report_field(const mf_solve_report* r, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(r, out);
    *out = wrap(r->report.field);
  });
}

const char* mf_solve_report_message(const mf_solve_report* r) { return r ? r->report.message.c_str() : ""; }

size_t mf_solve_report_log_size(const mf_solve_report* r) { return r ? r->report.log.size() : 0; }

mf_status mf_solve_report_log(const mf_solve_report* r, size_t i, double* residual, double* energy, double* step) {
  return run([&] {
    require(r);
    if (i >= r->report.log.size()) throw mf::InvalidConfiguration("log index out of range");
    const auto& e = r->report.log[i];
    if (residual) *residual = e.residual;
    if (energy) *energy = e.energy;
    if (step) *step = e.step;
  });
}

mf_status mf_continuation_run(const mf_grid* grid, double rho_start, double rho_end, int steps, double tol,
                              mf_continuation** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(grid, out);
    mf::ContinuationOptions opt;
    if (tol > 0.0) opt.tol = tol;
    *out = new mf_continuation{mf::continuation(grid->grid, rho_start, rho_end, steps, opt)};
  });
}

void mf_continuation_free(mf_continuation* c) { delete c; }

size_t mf_continuation_size(const mf_continuation* c) { return c ? c->report.entries.size() : 0; }

mf_status mf_continuation_entry_at(const mf_continuation* c, size_t i, mf_continuation_entry* out) {
  return run([&] {
    require(c, out);
    if (i >= c->report.entries.size()) throw mf::InvalidConfiguration("continuation index out of range");
    const auto& e = c->report.entries[i];
    *out = {e.rho, e.energy, e.max_u, e.mu, e.converged ? 1 : 0, e.iterations};
  });
}

mf_status mf_continuation_get_status(const mf_continuation* c, mf_continuation_status* out) {
  return run([&] {
    require(c, out);
    switch (c->report.status) {
    case mf::ContinuationStatus::ReachedTarget: *out = MF_CONT_REACHED_TARGET; break;
    case mf::ContinuationStatus::BlowUp: *out = MF_CONT_BLOW_UP; break;
    case mf::ContinuationStatus::StepUnderflow: *out = MF_CONT_STEP_UNDERFLOW; break;
    }
  });
}

const char* mf_continuation_status_name(mf_continuation_status s) {
  switch (s) {
  case MF_CONT_REACHED_TARGET: return mf::to_string(mf::ContinuationStatus::ReachedTarget);
  case MF_CONT_BLOW_UP: return mf::to_string(mf::ContinuationStatus::BlowUp);
  case MF_CONT_STEP_UNDERFLOW: return mf::to_string(mf::ContinuationStatus::StepUnderflow);
  }
  return "unknown";
}

int mf_continuation_solves(const mf_continuation* c) { return c ? c->report.solves : 0; }

mf_status mf_continuation_last_field(const mf_continuation* c, mf_field** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(c, out);
    if (!c->report.last_field) throw mf::InvalidConfiguration("continuation produced no converged field");
    *out = wrap(*c->report.last_field);
  });
}

mf_status mf_pohozaev_residual(const mf_field* u, double rho, double r, mf_pohozaev* out) {
  return run([&] {
    require(u, out);
    const auto b = mf::pohozaev_residual(u->field, rho, r);
    *out = {b.r,     b.volume_term,  b.f_flux,       b.half_v2, b.normal_u_v,
            b.mixed, b.gradient_dot, b.boundary_sum, b.residual};
  });
}

mf_status mf_local_mass(const mf_field* u, double rho, double r, double* out) {
  return run([&] {
    require(u, out);
    *out = mf::local_mass(u->field, rho, r);
  });
}

mf_status mf_rescale_extract(const mf_field* u, double rho, double R, int samples, mf_rescale** out) {
  return run([&] {
    if (out) *out = nullptr;
    require(u, out);
    *out = new mf_rescale{mf::rescale_extract(u->field, rho, R, samples > 0 ? samples : 401)};
  });
}

void mf_rescale_free(mf_rescale* r) { delete r; }

size_t mf_rescale_size(const mf_rescale* r) { return r ? r->report.x.size() : 0; }

mf_status mf_rescale_summary(const mf_rescale* r, double* alpha, double* mu, double* sup_distance) {
  return run([&] {
    require(r);
    if (alpha) *alpha = r->report.alpha;
    if (mu) *mu = r->report.mu;
    if (sup_distance) *sup_distance = r->report.sup_distance;
  });
}

mf_status mf_rescale_samples(const mf_rescale* r, double* x, double* rescaled, double* bubble, size_t len) {
  return run([&] {
    require(r);
    if (x) copy_out(r->report.x, x, len);
    if (rescaled) copy_out(r->report.rescaled, rescaled, len);
    if (bubble) copy_out(r->report.bubble, bubble, len);
  });
}

mf_status mf_far_field_compare(const mf_field* u, double rho, double r0, double* out) {
  return run([&] {
    require(u, out);
    *out = mf::far_field_compare(u->field, rho, r0);
  });
}

mf_status mf_gradient_balance(const double* points, size_t count, double* out) {
  return run([&] {
    require(points, out);
    std::vector<mf::BallPoint> pts;
    pts.reserve(count);
    for (size_t k = 0; k < count; ++k) pts.push_back(point(points + 4 * k));
    const auto g = mf::gradient_balance(pts);
    for (size_t k = 0; k < count; ++k)
      for (size_t a = 0; a < 4; ++a) out[4 * k + a] = g[k][a];
  });
}

} // extern "C"
