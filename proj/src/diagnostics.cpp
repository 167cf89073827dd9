#include "meanfield/diagnostics.hpp"

#include "meanfield/bubble.hpp"
#include "meanfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace meanfield {

namespace {

void check_rho(double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw InvalidConfiguration("rho must be finite and >= 0, got " + std::to_string(rho));
}

// int_{B_r} e^{u - shift}
double shifted_mass(const RadialField& u, double r, double shift) {
  return integrate_ball(u, r, [shift](double v) { return std::exp(v - shift); });
}

double field_max(const RadialField& u) { return *std::max_element(u.values().begin(), u.values().end()); }

} // namespace

PohozaevBreakdown pohozaev_residual(const RadialField& u, double rho, double r) {
  check_rho(rho);
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("Pohozaev radius must lie in (0, 1], got " + std::to_string(r));
  PohozaevBreakdown b;
  b.r = r;
  const double m = field_max(u);
  const double z = shifted_mass(u, 1.0, m);
  if (rho == 0.0) return b;

  const RadialField v = laplacian(u) * -1.0;
  const RadialField du = radial_derivative(u);
  const RadialField dv = radial_derivative(v);

  // 4 int_{B_r} rho (e^u - 1) / Z with Z = e^m z
  const double ball = 0.5 * kPi * kPi * std::pow(r, 4);
  b.volume_term = 4.0 * rho * (shifted_mass(u, r, m) - ball * std::exp(-m)) / z;

  const double ur = u.at(r);
  const double vr = v.at(r);
  const double dur = r == 1.0 ? 0.0 : du.at(r);
  const double dvr = dv.at(r);
  const double Fr = rho * (std::exp(ur - m) - std::exp(-m)) / z;
  const double area = kSphereArea * r * r * r;
  b.f_flux = area * r * Fr;
  b.half_v2 = area * 0.5 * r * vr * vr;
  b.normal_u_v = area * 2.0 * dur * vr;
  b.mixed = area * 2.0 * r * dur * dvr;
  b.gradient_dot = -area * r * dur * dvr;
  b.boundary_sum = b.f_flux + b.half_v2 + b.normal_u_v + b.mixed + b.gradient_dot;
  b.residual = b.volume_term - b.boundary_sum;
  return b;
}

double local_mass(const RadialField& u, double rho, double r) {
  check_rho(rho);
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("local mass radius must lie in [0, 1]");
  const double m = field_max(u);
  if (r == 1.0) return rho;
  return rho * shifted_mass(u, r, m) / shifted_mass(u, 1.0, m);
}

RescaleReport rescale_extract(const RadialField& u, double rho, double R, int samples) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw InvalidConfiguration("rescaling needs rho > 0");
  if (!(R >= 1.0) || !std::isfinite(R)) throw InvalidConfiguration("rescaling needs R >= 1");
  if (samples < 2) throw InvalidConfiguration("rescaling needs at least 2 samples");
  const double m = field_max(u);
  if (u[0] < m) throw DomainError("rescaling needs the maximum of u at r = 0");

  RescaleReport rep;
  rep.R = R;
  rep.alpha = m + std::log(shifted_mass(u, 1.0, m)) - std::log(rho);
  rep.mu = std::exp(-(u[0] - rep.alpha) / 4.0);
  if (rep.mu * R > 1.0)
    throw DomainError("rescaled ball exceeds the unit ball: largest admissible R is " + std::to_string(1.0 / rep.mu));

  const MonotoneCubic interp(u.grid().nodes(), u.values());
  rep.x.resize(static_cast<std::size_t>(samples));
  rep.rescaled.resize(rep.x.size());
  rep.bubble.resize(rep.x.size());
  for (std::size_t k = 0; k < rep.x.size(); ++k) {
    const double x = R * static_cast<double>(k) / static_cast<double>(samples - 1);
    rep.x[k] = x;
    rep.rescaled[k] = k == 0 ? 0.0 : interp(std::min(rep.mu * x, 1.0)) - u[0];
    rep.bubble[k] = bubble_profile(x);
    rep.sup_distance = std::max(rep.sup_distance, std::abs(rep.rescaled[k] - rep.bubble[k]));
  }
  return rep;
}

double far_field_profile(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("far-field profile needs r in (0, 1]");
  return 8.0 * (-std::log(r) + 0.5 * r * r - 0.5);
}

double far_field_compare(const RadialField& u, double rho, double r0) {
  check_rho(rho);
  if (!(r0 > 0.0 && r0 <= 1.0)) throw DomainError("far-field radius must lie in (0, 1]");
  double sup = std::abs(u.at(r0) - far_field_profile(r0));
  const auto r = u.grid().nodes();
  for (std::size_t i = 0; i < u.size(); ++i)
    if (r[i] > r0) sup = std::max(sup, std::abs(u[i] - far_field_profile(r[i])));
  return sup;
}

std::vector<Vec4> gradient_balance(std::span<const BallPoint> points, double h) {
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (points[j].norm() + 2 * h >= 1.0)
      throw DomainError("balance point " + std::to_string(j) + " too close to the boundary");
    for (std::size_t l = 0; l < j; ++l)
      if (distance(points[j], points[l]) == 0.0)
        throw DomainError("coincident balance points " + std::to_string(l) + " and " + std::to_string(j));
  }
  std::vector<Vec4> out;
  out.reserve(points.size());
  for (std::size_t j = 0; j < points.size(); ++j) {
    const BallPoint& y = points[j];
    Vec4 g = gradient_x([&](const BallPoint& x) { return robin(x, y); }, y, h);
    for (std::size_t l = 0; l < points.size(); ++l) {
      if (l == j) continue;
      const BallPoint& p = points[l];
      const double step = std::min(h, 0.25 * distance(y, p));
      const Vec4 gl = gradient_x([&](const BallPoint& x) { return green(x, p); }, y, step);
      for (std::size_t k = 0; k < 4; ++k) g[k] += gl[k];
    }
    out.push_back(g);
  }
  return out;
}

} // namespace meanfield
