#include "meanfield/green.hpp"

#include "meanfield/clamped.hpp"
#include "meanfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace meanfield {

namespace {

constexpr double kInv8Pi2 = 1.0 / (8.0 * kPi * kPi);

// log(1+t) - t/(1+t), accurate for small t.
double boggio_kernel(double t) {
  if (t < 0.1) {
    // sum_{k>=2} (-1)^k (k-1)/k t^k
    double term = t * t, sum = 0.0;
    for (int k = 2; k < 40; ++k) {
      const double c = static_cast<double>(k - 1) / k;
      sum += (k % 2 == 0 ? c : -c) * term;
      term *= t;
      if (term < 1e-18 * sum) break;
    }
    return sum;
  }
  return std::log1p(t) - t / (1.0 + t);
}

} // namespace

BallPoint::BallPoint(const Vec4& x) : x_(x) {
  for (double c : x_)
    if (!std::isfinite(c)) throw DomainError("ball point has a non-finite coordinate");
  if (norm() > 1.0 + 1e-12) throw DomainError("point outside the unit ball, |x| = " + std::to_string(norm()));
}

double BallPoint::norm2() const {
  double s = 0.0;
  for (double c : x_) s += c * c;
  return s;
}

double BallPoint::norm() const { return std::sqrt(norm2()); }

double BallPoint::defect() const {
  const double r = norm();
  return std::max(0.0, (1.0 - r) * (1.0 + r));
}

BallPoint BallPoint::shifted(std::size_t axis, double h) const {
  Vec4 y = x_;
  y[axis] += h;
  return BallPoint(y);
}

double distance(const BallPoint& x, const BallPoint& y) {
  double s = 0.0;
  for (std::size_t k = 0; k < 4; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
  return std::sqrt(s);
}

double boggio_modulus(const BallPoint& x, const BallPoint& y) {
  const double d = distance(x, y);
  if (d == 0.0) throw DomainError("boggio_modulus: coincident points");
  return std::sqrt(1.0 + x.defect() * y.defect() / (d * d));
}

double green(const BallPoint& x, const BallPoint& y) {
  const double d = distance(x, y);
  if (d == 0.0) throw DomainError("green: coincident points");
  // A^2 - 1 = (1-|x|^2)(1-|y|^2)/|x-y|^2 without cancellation; then
  // log A + 1/(2A^2) - 1/2 = (log(1+t) - t/(1+t)) / 2.
  const double t = x.defect() * y.defect() / (d * d);
  return 0.5 * kInv8Pi2 * boggio_kernel(t);
}

double robin(const BallPoint& x, const BallPoint& y) {
  const double d2 = [&] {
    double s = 0.0;
    for (std::size_t k = 0; k < 4; ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return s;
  }();
  const double bracket2 = d2 + x.defect() * y.defect();
  if (bracket2 <= 0.0) throw DomainError("robin: [x,y] vanishes (diagonal point on the sphere)");
  // log A + log|x-y| = log [x,y]; 1/(2A^2) = |x-y|^2 / (2 [x,y]^2).
  return kInv8Pi2 * (0.5 * std::log(bracket2) + 0.5 * d2 / bracket2 - 0.5);
}

double laplacian_robin_diag(const BallPoint& y, double h) {
  if (!(h > 0.0)) throw InvalidConfiguration("difference step must be positive");
  if (y.norm() + h >= 1.0)
    throw DomainError("laplacian_robin_diag: stencil of radius " + std::to_string(h) +
                      " leaves the ball at |y| = " + std::to_string(y.norm()));
  const double centre = robin(y, y);
  auto second_difference = [&](double step) {
    double s = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
      s += robin(y.shifted(k, step), y) - 2.0 * centre + robin(y.shifted(k, -step), y);
    return s / (step * step);
  };
  const double d0 = second_difference(h);
  const double d1 = second_difference(h / 2);
  const double d2 = second_difference(h / 4);
  const double e01 = (4.0 * d1 - d0) / 3.0;
  const double e12 = (4.0 * d2 - d1) / 3.0;
  return (16.0 * e12 - e01) / 15.0;
}

RadialField r1_solve(const BallPoint& P, GridPtr grid) {
  if (P.norm2() != 0.0)
    throw Unsupported("r1_solve: only the centre P = 0 is supported (radial discretisation)");
  // Boundary data of 4/|x|^2 on the unit sphere: value 4, radial slope -8.
  ClampedBilaplacian op(grid);
  return op.solve(RadialField::zeros(grid), 4.0, -8.0);
}

double con_value(const BallPoint& Q, GridPtr grid) {
  const RadialField r1 = r1_solve(Q, std::move(grid));
  return r1[0] + 16.0 * kPi * kPi * laplacian_robin_diag(Q);
}

std::vector<PointPair> sample_pairs(std::size_t count, std::uint64_t seed, double d_min, double d_max,
                                    double max_radius) {
  if (!(d_min > 0.0 && d_max >= d_min)) throw InvalidConfiguration("sample_pairs: need 0 < d_min <= d_max");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto direction = [&] {
    Vec4 v;
    double n2 = 0.0;
    do {
      n2 = 0.0;
      for (double& c : v) {
        c = gauss(rng);
        n2 += c * c;
      }
    } while (n2 < 1e-12);
    const double s = 1.0 / std::sqrt(n2);
    for (double& c : v) c *= s;
    return v;
  };
  std::vector<PointPair> out;
  out.reserve(count);
  const double log_lo = std::log(d_min), log_hi = std::log(d_max);
  while (out.size() < count) {
    const Vec4 dx = direction();
    const double rx = max_radius * std::pow(unit(rng), 0.25);
    Vec4 x, y;
    for (std::size_t k = 0; k < 4; ++k) x[k] = rx * dx[k];
    const double d = std::exp(log_lo + (log_hi - log_lo) * unit(rng));
    const Vec4 dy = direction();
    double ny = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      y[k] = x[k] + d * dy[k];
      ny += y[k] * y[k];
    }
    if (std::sqrt(ny) > max_radius) continue;
    out.emplace_back(BallPoint(x), BallPoint(y));
  }
  return out;
}

GreenBoundReport green_bound_check(const std::vector<PointPair>& samples) {
  GreenBoundReport rep;
  rep.samples = samples.size();
  rep.min_distance = samples.empty() ? 0.0 : 1e300;
  for (const auto& [x, y] : samples) {
    const double d = distance(x, y);
    rep.min_distance = std::min(rep.min_distance, d);
    rep.max_distance = std::max(rep.max_distance, d);
    const double g = green(x, y);
    rep.log_constant = std::max(rep.log_constant, std::abs(g) / std::log(2.0 + 1.0 / d));

    // Steps scale with |x-y| so the stencil never reaches the singularity.
    const double h = 1e-3 * d;
    auto gy = [&](const BallPoint& p) { return green(p, y); };
    const Vec4 grad = gradient_x(gy, x, h);
    double gn = 0.0;
    for (double c : grad) gn += c * c;
    rep.gradient_constant = std::max(rep.gradient_constant, std::sqrt(gn) * d);

    const double hh = 1e-2 * d;
    double hess = 0.0;
    const double g0 = gy(x);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        double v;
        if (a == b) {
          v = (gy(x.shifted(a, hh)) - 2 * g0 + gy(x.shifted(a, -hh))) / (hh * hh);
        } else {
          const BallPoint pp = x.shifted(a, hh).shifted(b, hh);
          const BallPoint pm = x.shifted(a, hh).shifted(b, -hh);
          const BallPoint mp = x.shifted(a, -hh).shifted(b, hh);
          const BallPoint mm = x.shifted(a, -hh).shifted(b, -hh);
          v = (gy(pp) - gy(pm) - gy(mp) + gy(mm)) / (4 * hh * hh);
        }
        hess += v * v;
      }
    }
    rep.hessian_constant = std::max(rep.hessian_constant, std::sqrt(hess) * d * d);
  }
  return rep;
}

} // namespace meanfield
