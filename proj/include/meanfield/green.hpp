#pragma once

// Clamped Green's function of Delta^2 on the unit ball of R^4 (Boggio's
// closed form), the regular part R, the auxiliary biharmonic function R1 and
// the attainment quantity R1(Q,Q) + 16 pi^2 Delta_x R(Q,Q).

#include "meanfield/radial.hpp"

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

namespace meanfield {

using Vec4 = std::array<double, 4>;

/// A point of the closed unit ball in R^4.
class BallPoint {
public:
  /// Throws DomainError when |x| > 1 + 1e-12.
  explicit BallPoint(const Vec4& x);
  static BallPoint on_axis(double r) { return BallPoint(Vec4{r, 0.0, 0.0, 0.0}); }
  static BallPoint origin() { return BallPoint(Vec4{}); }

  const Vec4& coords() const { return x_; }
  double operator[](std::size_t i) const { return x_[i]; }
  double norm2() const;
  double norm() const;
  /// 1 - |x|^2, never negative.
  double defect() const;

  BallPoint shifted(std::size_t axis, double h) const;

private:
  Vec4 x_;
};

double distance(const BallPoint& x, const BallPoint& y);

/// A = [x,y] / |x-y|, [x,y]^2 = |x-y|^2 + (1-|x|^2)(1-|y|^2).
double boggio_modulus(const BallPoint& x, const BallPoint& y);

/// G(x,y) = (1/8 pi^2) (log A + 1/(2A^2) - 1/2).
double green(const BallPoint& x, const BallPoint& y);

/// R(x,y) = G(x,y) + log|x-y| / (8 pi^2), smooth through x = y.
double robin(const BallPoint& x, const BallPoint& y);

/// Delta_x R(x,y) at x = y by central differences, Richardson-extrapolated
/// over h, h/2, h/4.
double laplacian_robin_diag(const BallPoint& y, double h = 1e-2);

/// Biharmonic R1(., P) with R1 = 4/|x-P|^2 and matching normal derivative on
/// the unit sphere. Only P = 0 is supported.
RadialField r1_solve(const BallPoint& P, GridPtr grid);

/// R1(Q,Q) + 16 pi^2 Delta_x R(Q,Q). Only Q = 0 is supported (through r1_solve).
double con_value(const BallPoint& Q, GridPtr grid);

/// Central fourth-order gradient in x of f(x) at x.
template <class F>
Vec4 gradient_x(F&& f, const BallPoint& x, double h) {
  Vec4 g{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double fp1 = f(x.shifted(k, h)), fm1 = f(x.shifted(k, -h));
    const double fp2 = f(x.shifted(k, 2 * h)), fm2 = f(x.shifted(k, -2 * h));
    g[k] = (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h);
  }
  return g;
}

struct GreenBoundReport {
  std::size_t samples = 0;
  double min_distance = 0.0;
  double max_distance = 0.0;
  /// max |G| / log(2 + 1/|x-y|)
  double log_constant = 0.0;
  /// max |grad_x G| |x-y|
  double gradient_constant = 0.0;
  /// max |D_x^2 G| |x-y|^2 (Frobenius norm)
  double hessian_constant = 0.0;
};

using PointPair = std::pair<BallPoint, BallPoint>;

/// Deterministic pairs: x uniform in |x| <= max_radius, |x-y| log-uniform in
/// [d_min, d_max], pairs leaving the ball rejected.
std::vector<PointPair> sample_pairs(std::size_t count, std::uint64_t seed, double d_min = 1e-6,
                                    double d_max = 1.0, double max_radius = 0.99);

/// Smallest constants fitting the Green's function bounds over the samples.
GreenBoundReport green_bound_check(const std::vector<PointPair>& samples);

} // namespace meanfield
