#pragma once

// Radial calculus on the unit ball of R^4.
//
// A radial function u(|x|) is sampled on nodes 0 = r_0 < ... < r_{n-1} = 1.
// Two discretisations of the Laplacian live here:
//
//  * clamped_laplacian: a vertex-centred finite-volume operator on dual cells
//    [r_{i-1/2}, r_{i+1/2}] with the S^3 measure. It is symmetric with respect
//    to the grid quadrature, so the discrete energy 1/2 sum w (Lu)^2 has the
//    discrete bilaplacian as its exact gradient. The clamped solver, the
//    energy and everything variational uses it.
//  * laplacian / bilaplacian: pointwise central differences whose truncation
//    error is a smooth function of r on uniform grids (including the centre
//    row), so that composing them stays consistent. bilaplacian extrapolates
//    its last two rows from the interior. Used for residual and identity
//    checks on sampled fields.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

namespace meanfield {

inline constexpr double kPi = std::numbers::pi;
// |S^3| = 2 pi^2, the area of the unit sphere in R^4.
inline constexpr double kSphereArea = 2.0 * kPi * kPi;
inline constexpr double kBallVolume = 0.5 * kPi * kPi;
// 64 pi^2: total mass of the standard bubble and the critical parameter.
inline constexpr double kCriticalMass = 64.0 * kPi * kPi;

class RadialGrid {
public:
  /// Nodes r_i = (i/(n-1))^q. Requires n >= 16 and q >= 1.
  static std::shared_ptr<const RadialGrid> make(int n, double q = 1.0);
  /// Arbitrary nodes (e.g. read back from CSV). Must start at 0, end at 1 and
  /// increase strictly.
  static std::shared_ptr<const RadialGrid> from_nodes(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }

  /// Quadrature weights: w_i = 2 pi^2 * int_{dual cell i} r^3 dr.
  std::span<const double> weights() const { return weights_; }
  /// int_{dual cell i} r^3 dr (no sphere factor).
  std::span<const double> cell_volumes() const { return volumes_; }
  /// k_{i+1/2} = r_{i+1/2}^3 / (r_{i+1} - r_i), size n-1.
  std::span<const double> flux_coefficients() const { return flux_; }

  /// Grading exponent when the nodes follow (i/(n-1))^q.
  std::optional<double> grading() const { return grading_; }
  bool uniform() const { return grading_ && *grading_ == 1.0; }

  /// Index i with r_i <= r < r_{i+1} (clamped to [0, n-2]).
  std::size_t cell_of(double r) const;

private:
  explicit RadialGrid(std::vector<double> nodes, std::optional<double> grading);

  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> volumes_;
  std::vector<double> flux_;
  std::optional<double> grading_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_grid(int n, double q = 1.0) { return RadialGrid::make(n, q); }

class RadialField {
public:
  RadialField(GridPtr grid, std::vector<double> values);

  static RadialField zeros(GridPtr grid);
  static RadialField sample(GridPtr grid, const std::function<double(double)>& f);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  /// Cubic Lagrange interpolation through the four nodes around r.
  double at(double r) const;

  RadialField operator+(const RadialField& other) const;
  RadialField operator-(const RadialField& other) const;
  RadialField operator*(double s) const;

private:
  GridPtr grid_;
  std::vector<double> values_;
};

RadialField laplacian(const RadialField& u);
RadialField bilaplacian(const RadialField& u);

/// sum_i w_i u(r_i).
double integrate(const RadialField& u);

/// int_{B_radius} map(u) dx; the integrand is the cubic interpolant of u,
/// pushed through map, integrated with 4-point Gauss-Legendre per cell.
double integrate_ball(const RadialField& u, double radius,
                      const std::function<double(double)>& map = {});

/// Finite-volume Laplacian with the outer flux fixed by u'(1) = boundary_slope.
RadialField clamped_laplacian(const RadialField& u, double boundary_slope = 0.0);

/// Solves the clamped problem Delta^2 u = f, u(1) = u'(1) = 0.
RadialField clamped_solve(const RadialField& f);

/// Second-order nodal u'(r); u'(0) = 0 by evenness.
RadialField radial_derivative(const RadialField& u);

class MonotoneCubic {
public:
  /// Fritsch-Carlson monotone cubic Hermite interpolant of (x_i, y_i).
  MonotoneCubic(std::span<const double> x, std::span<const double> y);
  double operator()(double x) const;

private:
  std::vector<double> x_, y_, slope_;
};

namespace detail {

// Finite-difference weights (Fornberg) for derivatives 0..2 at x0.
template <std::floating_point T>
void fd_weights(T x0, std::span<const T> x, std::vector<T>& d1, std::vector<T>& d2) {
  const std::size_t n = x.size();
  constexpr int m = 2;
  std::vector<T> c(n * (m + 1), T(0));
  auto at = [&](std::size_t i, int k) -> T& { return c[i * (m + 1) + k]; };
  T c1 = 1, c4 = x[0] - x0;
  at(0, 0) = 1;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), m);
    T c2 = 1;
    const T c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const T c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k > 0; --k)
          at(i, k) = c1 * (T(k) * at(i - 1, k - 1) - c5 * at(i - 1, k)) / c2;
        at(i, 0) = -c1 * c5 * at(i - 1, 0) / c2;
      }
      for (int k = mn; k > 0; --k)
        at(j, k) = (c4 * at(j, k) - T(k) * at(j, k - 1)) / c3;
      at(j, 0) = c4 * at(j, 0) / c3;
    }
    c1 = c2;
  }
  d1.assign(n, T(0));
  d2.assign(n, T(0));
  for (std::size_t i = 0; i < n; ++i) {
    d1[i] = at(i, 1);
    d2[i] = at(i, 2);
  }
}

// Pointwise radial Laplacian u'' + 3u'/r.
//  * interior: three-point non-uniform central differences;
//  * r = 0: a three-node row exact for 1 and r^2 whose error on r^4 matches the
//    interior row at r_1, so the truncation error stays smooth through the
//    centre and a second application remains consistent;
//  * r = 1: five-point one-sided differences.
template <std::floating_point T>
void pointwise_laplacian(std::span<const T> r, std::span<const T> u, std::span<T> out) {
  const std::size_t n = r.size();
  auto interior = [&](std::size_t i, T& a, T& b, T& c) {
    const T hm = r[i] - r[i - 1];
    const T hp = r[i + 1] - r[i];
    const T den = hm * hp * (hm + hp);
    const T d2m = 2 * hp / den, d20 = -2 * (hm + hp) / den, d2p = 2 * hm / den;
    const T d1m = -hp * hp / den, d10 = (hp * hp - hm * hm) / den, d1p = hm * hm / den;
    a = d2m + 3 * d1m / r[i];
    b = d20 + 3 * d10 / r[i];
    c = d2p + 3 * d1p / r[i];
  };
  for (std::size_t i = 1; i + 1 < n; ++i) {
    T a, b, c;
    interior(i, a, b, c);
    out[i] = a * u[i - 1] + b * u[i] + c * u[i + 1];
  }
  {
    T a, b, c;
    interior(1, a, b, c);
    const T r1 = r[1], r2 = r[2];
    const T r1s = r1 * r1, r2s = r2 * r2;
    const T target = b * r1s * r1s + c * r2s * r2s - 24 * r1s;
    const T det = r1s * r2s * r2s - r2s * r1s * r1s;
    const T w1 = (8 * r2s * r2s - r2s * target) / det;
    const T w2 = (r1s * target - r1s * r1s * 8) / det;
    out[0] = -(w1 + w2) * u[0] + w1 * u[1] + w2 * u[2];
  }
  {
    constexpr std::size_t k = 5;
    std::vector<T> xs(r.end() - k, r.end());
    std::vector<T> d1, d2;
    fd_weights<T>(r[n - 1], std::span<const T>(xs), d1, d2);
    T s1 = 0, s2 = 0;
    for (std::size_t j = 0; j < k; ++j) {
      s1 += d1[j] * u[n - k + j];
      s2 += d2[j] * u[n - k + j];
    }
    out[n - 1] = s2 + 3 * s1 / r[n - 1];
  }
}

} // namespace detail

} // namespace meanfield
