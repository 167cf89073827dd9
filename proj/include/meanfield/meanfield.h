#ifndef MEANFIELD_MEANFIELD_H
#define MEANFIELD_MEANFIELD_H

/*
 * C interface of libmeanfield.
 *
 * Every function returns an mf_status; MF_OK on success. On failure the
 * thread-local message from mf_last_error() describes the problem. Objects
 * are opaque handles released with the matching *_free function (passing
 * NULL is allowed). A handle output is set to NULL when the call fails.
 * Vectors in R^4 are double[4].
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(MEANFIELD_BUILDING)
#define MF_API __declspec(dllexport)
#else
#define MF_API __declspec(dllimport)
#endif
#else
#define MF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mf_status {
  MF_OK = 0,
  MF_ERR_INVALID_CONFIG = 1,
  MF_ERR_DOMAIN = 2,
  MF_ERR_SINGULAR = 3,
  MF_ERR_RANGE = 4,
  MF_ERR_UNSUPPORTED = 5,
  MF_ERR_IO = 6,
  MF_ERR_NULL_ARGUMENT = 7,
  MF_ERR_INTERNAL = 8
} mf_status;

MF_API const char* mf_last_error(void);
MF_API const char* mf_status_name(mf_status status);
MF_API const char* mf_version(void);
MF_API double mf_critical_mass(void);

/* ---- grids and fields ---- */

typedef struct mf_grid mf_grid;
typedef struct mf_field mf_field;

MF_API mf_status mf_grid_create(int n, double q, mf_grid** out);
MF_API void mf_grid_free(mf_grid* grid);
MF_API size_t mf_grid_size(const mf_grid* grid);
MF_API mf_status mf_grid_nodes(const mf_grid* grid, double* out, size_t len);
MF_API mf_status mf_grid_weights(const mf_grid* grid, double* out, size_t len);

MF_API mf_status mf_field_create(const mf_grid* grid, const double* values, size_t len, mf_field** out);
MF_API mf_status mf_field_zeros(const mf_grid* grid, mf_field** out);
MF_API void mf_field_free(mf_field* field);
MF_API size_t mf_field_size(const mf_field* field);
MF_API mf_status mf_field_values(const mf_field* field, double* out, size_t len);
MF_API mf_status mf_field_nodes(const mf_field* field, double* out, size_t len);
/* New handle to the grid the field lives on. */
MF_API mf_status mf_field_grid(const mf_field* field, mf_grid** out);

MF_API mf_status mf_field_read_csv(const char* path, mf_field** out);
MF_API mf_status mf_field_write_csv(const mf_field* field, const char* path);

MF_API mf_status mf_laplacian(const mf_field* u, mf_field** out);
MF_API mf_status mf_bilaplacian(const mf_field* u, mf_field** out);
MF_API mf_status mf_integrate(const mf_field* u, double* out);
MF_API mf_status mf_clamped_solve(const mf_field* f, mf_field** out);

/* ---- Green and Robin functions on the unit ball ---- */

MF_API mf_status mf_boggio_modulus(const double x[4], const double y[4], double* out);
MF_API mf_status mf_green(const double x[4], const double y[4], double* out);
MF_API mf_status mf_robin(const double x[4], const double y[4], double* out);
/* h <= 0 selects the default step. */
MF_API mf_status mf_laplacian_robin_diag(const double y[4], double h, double* out);
MF_API mf_status mf_r1_solve(const double p[4], const mf_grid* grid, mf_field** out);
MF_API mf_status mf_con_value(const double q[4], const mf_grid* grid, double* out);

typedef struct mf_green_bounds {
  size_t samples;
  double min_distance;
  double max_distance;
  double log_constant;
  double gradient_constant;
  double hessian_constant;
} mf_green_bounds;

MF_API mf_status mf_green_bound_check(size_t samples, uint64_t seed, mf_green_bounds* out);

/* ---- bubbles ---- */

MF_API mf_status mf_standard_bubble(const mf_grid* grid, double scale, mf_field** out);
MF_API mf_status mf_bubble_pde_residual(int n, double R, double gamma, double* out);
/* R may be INFINITY. */
MF_API mf_status mf_bubble_mass(double R, double* out);
MF_API mf_status mf_bubble_mass_quadrature(double R, int n, double* out);

typedef struct mf_projection mf_projection;

typedef struct mf_projection_info {
  double eps;
  double boundary_value;
  double boundary_slope;
  double defect;
  double predicted_order;
  double closed_form_error;
  double correction_residual;
  double projected_at_one;
  double projected_slope_at_one;
} mf_projection_info;

MF_API mf_status mf_project(double eps, const mf_grid* grid, mf_projection** out);
MF_API void mf_projection_free(mf_projection* p);
MF_API mf_status mf_projection_get_info(const mf_projection* p, mf_projection_info* out);
MF_API mf_status mf_projection_projected(const mf_projection* p, mf_field** out);
MF_API mf_status mf_projection_correction(const mf_projection* p, mf_field** out);

MF_API mf_status mf_j_energy(const mf_field* u, double rho, double* out);
/* grid may be NULL (graded default). energies has count entries. */
MF_API mf_status mf_energy_family(double rho, const double* eps, size_t count, const mf_grid* grid,
                                  double* energies);

/* ---- solver ---- */

typedef struct mf_solve_report mf_solve_report;

typedef struct mf_solve_summary {
  double rho;
  double energy;
  double max_u;
  double alpha;
  double mu;
  double residual;
  double raw_residual;
  int iterations;
  int converged;
} mf_solve_summary;

/* init may be NULL (zero field on grid); otherwise grid may be NULL. */
MF_API mf_status mf_solve_newton(double rho, const mf_grid* grid, const mf_field* init, double tol, int max_iter,
                                 mf_solve_report** out);
MF_API mf_status mf_minimize(double rho, const mf_grid* grid, const mf_field* init, double tol, int max_iter,
                             mf_solve_report** out);
MF_API void mf_solve_report_free(mf_solve_report* r);
MF_API mf_status mf_solve_report_summary(const mf_solve_report* r, mf_solve_summary* out);
MF_API mf_status mf_solve_report_field(const mf_solve_report* r, mf_field** out);
MF_API const char* mf_solve_report_message(const mf_solve_report* r);
MF_API size_t mf_solve_report_log_size(const mf_solve_report* r);
/* residual, energy and step may be NULL. */
MF_API mf_status mf_solve_report_log(const mf_solve_report* r, size_t i, double* residual, double* energy,
                                     double* step);

typedef enum mf_continuation_status {
  MF_CONT_REACHED_TARGET = 0,
  MF_CONT_BLOW_UP = 1,
  MF_CONT_STEP_UNDERFLOW = 2
} mf_continuation_status;

typedef struct mf_continuation_entry {
  double rho;
  double energy;
  double max_u;
  double mu;
  int converged;
  int iterations;
} mf_continuation_entry;

typedef struct mf_continuation mf_continuation;

MF_API mf_status mf_continuation_run(const mf_grid* grid, double rho_start, double rho_end, int steps, double tol,
                                     mf_continuation** out);
MF_API void mf_continuation_free(mf_continuation* c);
MF_API size_t mf_continuation_size(const mf_continuation* c);
MF_API mf_status mf_continuation_entry_at(const mf_continuation* c, size_t i, mf_continuation_entry* out);
MF_API mf_status mf_continuation_get_status(const mf_continuation* c, mf_continuation_status* out);
MF_API const char* mf_continuation_status_name(mf_continuation_status s);
MF_API int mf_continuation_solves(const mf_continuation* c);
MF_API mf_status mf_continuation_last_field(const mf_continuation* c, mf_field** out);

/* ---- diagnostics ---- */

typedef struct mf_pohozaev {
  double r;
  double volume_term;
  double f_flux;
  double half_v2;
  double normal_u_v;
  double mixed;
  double gradient_dot;
  double boundary_sum;
  double residual;
} mf_pohozaev;

MF_API mf_status mf_pohozaev_residual(const mf_field* u, double rho, double r, mf_pohozaev* out);
MF_API mf_status mf_local_mass(const mf_field* u, double rho, double r, double* out);

typedef struct mf_rescale mf_rescale;

MF_API mf_status mf_rescale_extract(const mf_field* u, double rho, double R, int samples, mf_rescale** out);
MF_API void mf_rescale_free(mf_rescale* r);
MF_API size_t mf_rescale_size(const mf_rescale* r);
/* alpha, mu, sup_distance; any pointer may be NULL. */
MF_API mf_status mf_rescale_summary(const mf_rescale* r, double* alpha, double* mu, double* sup_distance);
/* x, rescaled and bubble each hold mf_rescale_size() values; any may be NULL. */
MF_API mf_status mf_rescale_samples(const mf_rescale* r, double* x, double* rescaled, double* bubble, size_t len);

MF_API mf_status mf_far_field_compare(const mf_field* u, double rho, double r0, double* out);
/* points and out hold 4*count doubles. */
MF_API mf_status mf_gradient_balance(const double* points, size_t count, double* out);

#ifdef __cplusplus
}
#endif

#endif
