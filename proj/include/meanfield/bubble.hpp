#pragma once

// Standard bubble on R^4 and the concentrated test functions
//
//   U_eps(r) = log(gamma eps^4) - 4 log(eps^2 + r^2),   gamma = 384,
//
// together with their clamped projections and the energy
// J_rho(u) = 1/2 int |Delta u|^2 - rho log int e^u.

#include "meanfield/radial.hpp"

#include <span>
#include <vector>

namespace meanfield {

inline constexpr double kBubbleGamma = 384.0;
// 8 sqrt(6); the bubble is -4 log(1 + r^2 / kBubbleScale2).
inline const double kBubbleScale2 = 8.0 * std::sqrt(6.0);

/// -4 log(1 + r^2/(8 sqrt 6)).
double bubble_profile(double r);

/// U_eps(r) for a given gamma.
double bubble_u(double eps, double r, double gamma = kBubbleGamma);
/// dU_eps/dr.
double bubble_u_prime(double eps, double r);

/// Samples bubble_profile(scale * r_i).
RadialField standard_bubble(GridPtr grid, double scale);

struct BubbleResidual {
  int n = 0;
  double R = 0.0;
  double gamma = kBubbleGamma;
  /// max |Delta^2 u - e^u| over the interior nodes of [0, R].
  double max_residual = 0.0;
  std::vector<double> x;
  std::vector<double> residual;
};

/// Pointwise residual of Delta^2 u = e^u for u = log(gamma/384) + bubble on a
/// uniform grid of [0, R] with n nodes. Evaluated in extended precision so
/// that rounding (~eps/h^4) stays below the truncation error.
BubbleResidual bubble_pde_residual(int n, double R, double gamma = kBubbleGamma);

/// int_{B_R} e^{bubble}. R may be +infinity (gives 64 pi^2).
double bubble_mass(double R);
/// Same integral through the grid quadrature (integrate_ball) of the sampled
/// profile on n uniform nodes.
double bubble_mass_quadrature(double R, int n);

struct ProjectionReport {
  double eps = 0.0;
  RadialField projected;
  RadialField correction;
  /// U_eps(1), U_eps'(1): the boundary data of the correction.
  double boundary_value = 0.0;
  double boundary_slope = 0.0;
  /// max |phi - log(gamma eps^4) + 64 pi^2 R(x,0) + eps^2 R1(x,0)| over nodes.
  double defect = 0.0;
  double predicted_order = 4.0;
  /// max |phi - (a + b r^2)| with the radial closed form.
  double closed_form_error = 0.0;
  /// max over rows < n-1 of |Delta_h^2 phi| / (|L||L||phi|), a rounding-level
  /// backward error.
  double correction_residual = 0.0;
  /// projected(1) and its one-sided radial derivative at 1.
  double projected_at_one = 0.0;
  double projected_slope_at_one = 0.0;
};

/// Clamped projection P U_eps = U_eps - phi_eps, 0 < eps <= 0.3.
ProjectionReport project(double eps, GridPtr grid);

/// Closed form of phi_eps at radius r.
double projection_correction_exact(double eps, double r);

/// J_rho(u) with the finite-volume Laplacian (u'(1) = 0) and grid quadrature.
/// Throws RangeError when u exceeds 700 anywhere.
double j_energy(const RadialField& u, double rho);

/// Directional derivative of j_energy at u along h.
double j_energy_derivative(const RadialField& u, const RadialField& h, double rho);

struct EnergyPoint {
  double eps;
  double energy;
};

/// Graded grid used by energy_family when none is supplied (q = 2, n = 2049).
GridPtr default_family_grid();

/// J_rho(P U_eps) for each eps. eps_list must be strictly decreasing inside
/// (0, 0.3], and the grid must have at least 8 nodes in r <= min eps.
std::vector<EnergyPoint> energy_family(double rho, std::span<const double> eps_list,
                                       GridPtr grid = nullptr);

/// Least-squares slope of energy against log(1/eps) over the given points.
double family_slope(std::span<const EnergyPoint> points);

} // namespace meanfield
