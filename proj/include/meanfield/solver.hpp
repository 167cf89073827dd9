#pragma once

// Radial solutions of Delta^2 u = rho e^u / int e^u with u(1) = u'(1) = 0.
//
// The discrete problem is the Euler-Lagrange equation of j_energy:
//   (L L u)_i = rho e^{u_i} / sum_j w_j e^{u_j},   i < n-1,   u_{n-1} = 0.
// Residuals are measured in the solution norm, G(u) = u - S(rho e^u / Z),
// with S the clamped solve; see SolveReport::raw_residual for the pointwise one.

#include "meanfield/radial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace meanfield {

struct IterationLog {
  int iteration;
  double residual;
  double energy;
  double step;
};

struct SolveReport {
  double rho = 0.0;
  RadialField field;
  double energy = 0.0;
  double max_u = 0.0;
  /// log(int e^u / rho)
  double alpha = 0.0;
  /// exp(-(max_u - alpha)/4)
  double mu = 0.0;
  /// max |G(u)|
  double residual = 0.0;
  /// max over rows < n-1 of |(L L u)_i - rho e^{u_i}/Z|
  double raw_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string message;
  std::vector<IterationLog> log;
};

/// G(u) = u - S(rho e^u / Z).
RadialField euler_lagrange_residual(const RadialField& u, double rho);

/// Fills energy, max_u, alpha, mu, residual and raw_residual from u.
SolveReport evaluate_solution(const RadialField& u, double rho);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// smallest damping factor tried is 2^-max_halvings
  int max_halvings = 10;
};

SolveReport solve_newton(double rho, const RadialField& init, const NewtonOptions& opt = {});

struct MinimizeOptions {
  double tol = 1e-10;
  int max_iter = 20000;
  double armijo = 1e-4;
};

/// H^2-gradient descent with backtracking; requires 0 < rho < 64 pi^2.
SolveReport minimize(double rho, const RadialField& init, const MinimizeOptions& opt = {});

enum class ContinuationStatus { ReachedTarget, BlowUp, StepUnderflow };

const char* to_string(ContinuationStatus s);

struct ContinuationEntry {
  double rho;
  double energy;
  double max_u;
  double mu;
  bool converged;
  int iterations;
};

struct ContinuationOptions {
  double tol = 1e-10;
  int max_iter = 50;
  double blowup_max_u = 40.0;
  double blowup_mu = 1e-4;
  /// step halving stops below nominal * 2^-max_halvings
  int max_halvings = 10;
};

struct ContinuationReport {
  std::vector<ContinuationEntry> entries;
  ContinuationStatus status = ContinuationStatus::ReachedTarget;
  /// attempted solves, including rejected ones
  int solves = 0;
  std::optional<RadialField> last_field;
};

/// Warm-started Newton sweep from rho_start to rho_end in `steps` nominal
/// steps, halving the step on failure.
ContinuationReport continuation(GridPtr grid, double rho_start, double rho_end, int steps,
                                const ContinuationOptions& opt = {});

} // namespace meanfield
