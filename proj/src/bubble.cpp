#include "meanfield/bubble.hpp"

#include "meanfield/clamped.hpp"
#include "meanfield/errors.hpp"
#include "meanfield/green.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace meanfield {

double bubble_profile(double r) { return -4.0 * std::log1p(r * r / kBubbleScale2); }

double bubble_u(double eps, double r, double gamma) {
  return std::log(gamma) + 4.0 * std::log(eps) - 4.0 * std::log(eps * eps + r * r);
}

double bubble_u_prime(double eps, double r) { return -8.0 * r / (eps * eps + r * r); }

RadialField standard_bubble(GridPtr grid, double scale) {
  if (!(scale > 0.0)) throw InvalidConfiguration("bubble scale must be positive");
  return RadialField::sample(std::move(grid), [scale](double r) { return bubble_profile(scale * r); });
}

BubbleResidual bubble_pde_residual(int n, double R, double gamma) {
  using LD = long double;
  if (n < 64) throw InvalidConfiguration("bubble residual needs n >= 64, got " + std::to_string(n));
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidConfiguration("bubble residual needs 0 < R < inf");
  if (!(gamma > 0.0)) throw InvalidConfiguration("gamma must be positive");
  const std::size_t m = static_cast<std::size_t>(n);
  std::vector<LD> s(m), u(m), lap(m), bilap(m);
  const LD shift = std::log(static_cast<LD>(gamma) / 384.0L);
  const LD scale2 = 8.0L * std::sqrt(6.0L);
  for (std::size_t i = 0; i < m; ++i) {
    s[i] = static_cast<LD>(i) / static_cast<LD>(m - 1);
    const LD x = static_cast<LD>(R) * s[i];
    u[i] = shift - 4.0L * std::log1p(x * x / scale2);
  }
  detail::pointwise_laplacian<LD>(s, u, lap);
  detail::pointwise_laplacian<LD>(s, lap, bilap);
  const LD r4 = std::pow(static_cast<LD>(R), 4);

  BubbleResidual out;
  out.n = n;
  out.R = R;
  out.gamma = gamma;
  // the last two rows see the one-sided boundary stencil twice
  for (std::size_t i = 0; i + 2 < m; ++i) {
    const double res = static_cast<double>(std::abs(bilap[i] / r4 - std::exp(u[i])));
    out.x.push_back(static_cast<double>(R * s[i]));
    out.residual.push_back(res);
    out.max_residual = std::max(out.max_residual, res);
  }
  return out;
}

double bubble_mass(double R) {
  if (!(R >= 0.0)) throw InvalidConfiguration("bubble_mass needs R >= 0");
  if (std::isinf(R)) return kCriticalMass;
  // int_0^R 2 pi^2 r^3 e^u dr with e^u = (1 + S)^{-4}, S = r^2 / (8 sqrt 6)
  const double S = R * R / kBubbleScale2;
  const double p = 1.0 / (1.0 + S);
  return kCriticalMass * (1.0 - 3.0 * p * p + 2.0 * p * p * p);
}

double bubble_mass_quadrature(double R, int n) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InvalidConfiguration("quadrature mass needs 0 < R < inf");
  auto grid = make_grid(n);
  const auto u = standard_bubble(grid, R);
  return std::pow(R, 4) * integrate_ball(u, 1.0, [](double v) { return std::exp(v); });
}

double projection_correction_exact(double eps, double r) {
  const double e2 = eps * eps;
  const double b = -4.0 / (1.0 + e2);
  const double a = std::log(kBubbleGamma) + 4.0 * std::log(eps) - 4.0 * std::log1p(e2) + 4.0 / (1.0 + e2);
  return a + b * r * r;
}

ProjectionReport project(double eps, GridPtr grid) {
  if (!(eps > 0.0 && eps <= 0.3))
    throw InvalidConfiguration("projection needs 0 < eps <= 0.3, got " + std::to_string(eps));
  const std::size_t n = grid->size();
  ClampedBilaplacian op(grid);

  ProjectionReport rep{eps, RadialField::zeros(grid), RadialField::zeros(grid)};
  rep.boundary_value = bubble_u(eps, 1.0);
  rep.boundary_slope = bubble_u_prime(eps, 1.0);
  rep.correction = op.solve(RadialField::zeros(grid), rep.boundary_value, rep.boundary_slope);

  const auto U = RadialField::sample(grid, [eps](double r) { return bubble_u(eps, r); });
  rep.projected = U - rep.correction;

  const RadialField r1 = r1_solve(BallPoint::origin(), grid);
  const double log_ge4 = std::log(kBubbleGamma) + 4.0 * std::log(eps);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid->node(i);
    const double R0 = robin(BallPoint::on_axis(r), BallPoint::origin());
    const double expansion = log_ge4 - kCriticalMass * R0 - eps * eps * r1[i];
    rep.defect = std::max(rep.defect, std::abs(rep.correction[i] - expansion));
    rep.closed_form_error =
        std::max(rep.closed_form_error, std::abs(rep.correction[i] - projection_correction_exact(eps, r)));
  }
  // Componentwise backward error of Delta^2 phi = 0: the raw residual sits at
  // eps |phi| / h^4, so it is divided by |L| |L| |phi| (absolute stencils).
  const auto applied = op.apply(rep.correction, rep.boundary_slope);
  const auto vol = grid->cell_volumes();
  const auto k = grid->flux_coefficients();
  auto abs_lap = [&](std::span<const double> v, double slope) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double km = i > 0 ? k[i - 1] : 0.0, kp = i + 1 < n ? k[i] : 0.0;
      double s = (km + kp) * std::abs(v[i]);
      if (i > 0) s += km * std::abs(v[i - 1]);
      s += i + 1 < n ? kp * std::abs(v[i + 1]) : std::abs(slope);
      out[i] = s / vol[i];
    }
    return out;
  };
  const auto scale = abs_lap(abs_lap(rep.correction.values(), rep.boundary_slope), 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i)
    rep.correction_residual = std::max(rep.correction_residual, std::abs(applied[i]) / scale[i]);

  rep.projected_at_one = rep.projected[n - 1];
  rep.projected_slope_at_one = radial_derivative(rep.projected)[n - 1];
  return rep;
}

namespace {

double log_mass(const RadialField& u) {
  const auto w = u.grid().weights();
  const double m = *std::max_element(u.values().begin(), u.values().end());
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * std::exp(u[i] - m);
  return m + std::log(s);
}

void check_energy_args(const RadialField& u, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw InvalidConfiguration("energy needs a finite rho >= 0");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 700.0)
      throw RangeError("field value " + std::to_string(u[i]) + " above 700 at node " + std::to_string(i));
}

} // namespace

double j_energy(const RadialField& u, double rho) {
  check_energy_args(u, rho);
  const auto lu = clamped_laplacian(u);
  const auto w = u.grid().weights();
  double dirichlet = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dirichlet += w[i] * lu[i] * lu[i];
  return 0.5 * dirichlet - rho * log_mass(u);
}

double j_energy_derivative(const RadialField& u, const RadialField& h, double rho) {
  check_energy_args(u, rho);
  const auto lu = clamped_laplacian(u);
  const auto lh = clamped_laplacian(h);
  const auto w = u.grid().weights();
  const double m = *std::max_element(u.values().begin(), u.values().end());
  double quad = 0.0, z = 0.0, zh = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    quad += w[i] * lu[i] * lh[i];
    const double e = w[i] * std::exp(u[i] - m);
    z += e;
    zh += e * h[i];
  }
  return quad - rho * zh / z;
}

GridPtr default_family_grid() { return make_grid(2049, 2.0); }

std::vector<EnergyPoint> energy_family(double rho, std::span<const double> eps_list, GridPtr grid) {
  if (eps_list.empty()) throw InvalidConfiguration("energy_family needs at least one eps");
  for (std::size_t k = 0; k < eps_list.size(); ++k) {
    if (!(eps_list[k] > 0.0 && eps_list[k] <= 0.3))
      throw InvalidConfiguration("eps " + std::to_string(eps_list[k]) + " outside (0, 0.3]");
    if (k > 0 && !(eps_list[k] < eps_list[k - 1]))
      throw InvalidConfiguration("eps list must be strictly decreasing");
  }
  if (!grid) grid = default_family_grid();
  const double eps_min = eps_list.back();
  const auto nodes = grid->nodes();
  const auto inside = std::upper_bound(nodes.begin(), nodes.end(), eps_min) - nodes.begin();
  if (inside < 8)
    throw InvalidConfiguration("grid resolves eps = " + std::to_string(eps_min) + " with only " +
                               std::to_string(inside) + " nodes (need 8)");
  std::vector<EnergyPoint> out;
  out.reserve(eps_list.size());
  for (double eps : eps_list) {
    const auto rep = project(eps, grid);
    out.push_back({eps, j_energy(rep.projected, rho)});
  }
  return out;
}

double family_slope(std::span<const EnergyPoint> points) {
  if (points.size() < 2) throw InvalidConfiguration("slope fit needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double k = static_cast<double>(points.size());
  for (const auto& p : points) {
    const double x = -std::log(p.eps);
    sx += x;
    sy += p.energy;
    sxx += x * x;
    sxy += x * p.energy;
  }
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace meanfield
