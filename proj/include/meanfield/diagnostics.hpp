#pragma once

// Blow-up diagnostics for radial fields: Pohozaev identity on balls, local
// mass, rescaling to the standard bubble, far-field comparison with
// 64 pi^2 G(., 0) and the balance identity for concentration points.

#include "meanfield/green.hpp"
#include "meanfield/radial.hpp"

#include <span>
#include <vector>

namespace meanfield {

/// Terms of the Pohozaev identity on B_r centred at 0 for
/// Delta^2 u = f(u), f(u) = rho e^u / Z, F(u) = rho (e^u - 1) / Z, v = -Delta u.
/// Each boundary term already carries the sphere area 2 pi^2 r^3.
struct PohozaevBreakdown {
  double r = 0.0;
  /// 4 int_{B_r} F(u)
  double volume_term = 0.0;
  /// <x,nu> F(u) = r F(u(r))
  double f_flux = 0.0;
  /// 1/2 v^2 <x,nu>
  double half_v2 = 0.0;
  /// 2 (d_nu u) v
  double normal_u_v = 0.0;
  /// <x,Du> d_nu v + <x,Dv> d_nu u = 2 r u' v'
  double mixed = 0.0;
  /// -<Dv,Du> <x,nu> = -r u' v'
  double gradient_dot = 0.0;
  double boundary_sum = 0.0;
  /// volume_term - boundary_sum
  double residual = 0.0;
};

/// r in (0, 1]. At r = 1 the clamped condition u'(1) = 0 is used.
PohozaevBreakdown pohozaev_residual(const RadialField& u, double rho, double r);

/// rho int_{B_r} e^u / int_B e^u.
double local_mass(const RadialField& u, double rho, double r);

struct RescaleReport {
  double alpha = 0.0;
  double mu = 0.0;
  double R = 0.0;
  std::vector<double> x;
  /// u(mu x) - u(0), i.e. u_hat(mu x) + 4 log mu
  std::vector<double> rescaled;
  std::vector<double> bubble;
  double sup_distance = 0.0;
};

/// R >= 1; samples `samples` equispaced points of [0, R]. Throws DomainError
/// when mu R > 1, naming the largest admissible R.
RescaleReport rescale_extract(const RadialField& u, double rho, double R, int samples = 401);

/// 64 pi^2 G(x, 0) at |x| = r: 8 (log(1/r) + r^2/2 - 1/2).
double far_field_profile(double r);

/// sup over r in [r0, 1] (r0 and every node above it) of |u(r) - 64 pi^2 G(r, 0)|.
double far_field_compare(const RadialField& u, double rho, double r0);

/// grad_x R(x_j, x_j) + sum_{l != j} grad_x G(x_j, x_l) for each point.
std::vector<Vec4> gradient_balance(std::span<const BallPoint> points, double h = 1e-3);

} // namespace meanfield
