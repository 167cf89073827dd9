#include "meanfield/radial.hpp"

#include "meanfield/clamped.hpp"
#include "meanfield/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

namespace meanfield {

namespace {

constexpr std::array<double, 4> kGaussNodes = {-0.8611363115940526, -0.3399810435848563,
                                               0.3399810435848563, 0.8611363115940526};
constexpr std::array<double, 4> kGaussWeights = {0.3478548451374538, 0.6521451548625461,
                                                 0.6521451548625461, 0.3478548451374538};

std::optional<double> detect_grading(const std::vector<double>& r) {
  const std::size_t n = r.size();
  const double step = 1.0 / static_cast<double>(n - 1);
  const double q = std::log(r[1]) / std::log(step);
  if (!std::isfinite(q) || q < 1.0 - 1e-9) return std::nullopt;
  const double snapped = std::abs(q - std::round(q)) < 1e-9 ? std::round(q) : q;
  for (std::size_t i = 0; i < n; ++i) {
    const double expect = std::pow(static_cast<double>(i) * step, snapped);
    if (std::abs(expect - r[i]) > 1e-13) return std::nullopt;
  }
  return snapped;
}

// Cubic Lagrange on the four nodes starting at s.
double lagrange4(std::span<const double> x, std::span<const double> y, std::size_t s, double t) {
  double acc = 0.0;
  for (std::size_t a = s; a < s + 4; ++a) {
    double l = 1.0;
    for (std::size_t b = s; b < s + 4; ++b)
      if (b != a) l *= (t - x[b]) / (x[a] - x[b]);
    acc += l * y[a];
  }
  return acc;
}

std::size_t stencil_start(std::size_t cell, std::size_t n) {
  const std::size_t s = cell > 0 ? cell - 1 : 0;
  return std::min(s, n - 4);
}

} // namespace

RadialGrid::RadialGrid(std::vector<double> nodes, std::optional<double> grading)
    : nodes_(std::move(nodes)), grading_(grading) {
  const std::size_t n = nodes_.size();
  weights_.resize(n);
  volumes_.resize(n);
  flux_.resize(n - 1);
  auto mid = [&](std::size_t i) { return 0.5 * (nodes_[i] + nodes_[i + 1]); };
  for (std::size_t i = 0; i < n; ++i) {
    const double lo = i == 0 ? 0.0 : mid(i - 1);
    const double hi = i + 1 == n ? 1.0 : mid(i);
    volumes_[i] = 0.25 * (std::pow(hi, 4) - std::pow(lo, 4));
    weights_[i] = kSphereArea * volumes_[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double m = mid(i);
    flux_[i] = m * m * m / (nodes_[i + 1] - nodes_[i]);
  }
}

GridPtr RadialGrid::make(int n, double q) {
  if (n < 16) throw InvalidConfiguration("grid needs at least 16 nodes, got " + std::to_string(n));
  if (!(q >= 1.0) || !std::isfinite(q))
    throw InvalidConfiguration("grading exponent must be >= 1, got " + std::to_string(q));
  std::vector<double> r(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) r[i] = std::pow(static_cast<double>(i) / (n - 1), q);
  r.front() = 0.0;
  r.back() = 1.0;
  return GridPtr(new RadialGrid(std::move(r), q));
}

GridPtr RadialGrid::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 16)
    throw InvalidConfiguration("grid needs at least 16 nodes, got " + std::to_string(nodes.size()));
  if (nodes.front() != 0.0 || nodes.back() != 1.0)
    throw InvalidConfiguration("grid nodes must start at 0 and end at 1");
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
    if (!(nodes[i + 1] > nodes[i]))
      throw InvalidConfiguration("grid nodes must increase strictly (node " + std::to_string(i + 1) + ")");
  auto q = detect_grading(nodes);
  return GridPtr(new RadialGrid(std::move(nodes), q));
}

std::size_t RadialGrid::cell_of(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  std::size_t i = it == nodes_.begin() ? 0 : static_cast<std::size_t>(it - nodes_.begin()) - 1;
  return std::min(i, nodes_.size() - 2);
}

RadialField::RadialField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw InvalidConfiguration("field needs a grid");
  if (values_.size() != grid_->size())
    throw InvalidConfiguration("field has " + std::to_string(values_.size()) + " values for " +
                               std::to_string(grid_->size()) + " nodes");
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw RangeError("non-finite field value at node " + std::to_string(i));
}

RadialField RadialField::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return RadialField(std::move(grid), std::vector<double>(n, 0.0));
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
  return RadialField(std::move(grid), std::move(v));
}

double RadialField::at(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("radius " + std::to_string(r) + " outside [0,1]");
  const std::size_t s = stencil_start(grid_->cell_of(r), size());
  return lagrange4(grid_->nodes(), values_, s, r);
}

RadialField RadialField::operator+(const RadialField& other) const {
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
  return RadialField(grid_, std::move(v));
}

RadialField RadialField::operator-(const RadialField& other) const {
  std::vector<double> v(values_);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= other.values_[i];
  return RadialField(grid_, std::move(v));
}

RadialField RadialField::operator*(double s) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return RadialField(grid_, std::move(v));
}

RadialField laplacian(const RadialField& u) {
  std::vector<double> out(u.size());
  detail::pointwise_laplacian<double>(u.grid().nodes(), u.values(), out);
  return RadialField(u.grid_ptr(), std::move(out));
}

RadialField bilaplacian(const RadialField& u) {
  RadialField lu = laplacian(u);
  std::vector<double> out(u.size());
  const auto r = u.grid().nodes();
  detail::pointwise_laplacian<double>(r, lu.values(), out);
  // The one-sided boundary row of the first pass has a different error
  // constant than the interior rows; differentiating that jump again costs
  // O(1). The last two rows are extrapolated quadratically from the interior.
  const std::size_t n = out.size();
  const std::size_t a = n - 5, b = n - 4, c = n - 3;
  for (std::size_t k = n - 2; k < n; ++k) {
    const double x = r[k];
    out[k] = out[a] * (x - r[b]) * (x - r[c]) / ((r[a] - r[b]) * (r[a] - r[c])) +
             out[b] * (x - r[a]) * (x - r[c]) / ((r[b] - r[a]) * (r[b] - r[c])) +
             out[c] * (x - r[a]) * (x - r[b]) / ((r[c] - r[a]) * (r[c] - r[b]));
  }
  return RadialField(u.grid_ptr(), std::move(out));
}

double integrate(const RadialField& u) {
  const auto w = u.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i];
  return s;
}

double integrate_ball(const RadialField& u, double radius, const std::function<double(double)>& map) {
  if (!(radius >= 0.0 && radius <= 1.0))
    throw DomainError("ball radius " + std::to_string(radius) + " outside [0,1]");
  const auto r = u.grid().nodes();
  const std::size_t n = u.size();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n && r[i] < radius; ++i) {
    const double a = r[i];
    const double b = std::min(r[i + 1], radius);
    const double half = 0.5 * (b - a), centre = 0.5 * (a + b);
    const std::size_t s = stencil_start(i, n);
    double cell = 0.0;
    for (std::size_t g = 0; g < 4; ++g) {
      const double x = centre + half * kGaussNodes[g];
      double v = lagrange4(r, u.values(), s, x);
      if (map) v = map(v);
      cell += kGaussWeights[g] * v * x * x * x;
    }
    total += half * cell;
  }
  return kSphereArea * total;
}

RadialField clamped_laplacian(const RadialField& u, double boundary_slope) {
  const auto& g = u.grid();
  const std::size_t n = g.size();
  const auto vol = g.cell_volumes();
  const auto k = g.flux_coefficients();
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fp = i + 1 < n ? k[i] * (u[i + 1] - u[i]) : boundary_slope;
    const double fm = i > 0 ? k[i - 1] * (u[i] - u[i - 1]) : 0.0;
    out[i] = (fp - fm) / vol[i];
  }
  return RadialField(u.grid_ptr(), std::move(out));
}

RadialField clamped_solve(const RadialField& f) {
  return ClampedBilaplacian(f.grid_ptr()).solve(f);
}

RadialField radial_derivative(const RadialField& u) {
  const auto r = u.grid().nodes();
  const std::size_t n = u.size();
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = r[i] - r[i - 1], hp = r[i + 1] - r[i];
    const double den = hm * hp * (hm + hp);
    d[i] = (-hp * hp * u[i - 1] + (hp * hp - hm * hm) * u[i] + hm * hm * u[i + 1]) / den;
  }
  std::vector<double> d1, d2;
  const std::vector<double> xs(r.end() - 5, r.end());
  detail::fd_weights<double>(r[n - 1], std::span<const double>(xs), d1, d2);
  double s = 0.0;
  for (std::size_t j = 0; j < 5; ++j) s += d1[j] * u[n - 5 + j];
  d[n - 1] = s;
  return RadialField(u.grid_ptr(), std::move(d));
}

MonotoneCubic::MonotoneCubic(std::span<const double> x, std::span<const double> y)
    : x_(x.begin(), x.end()), y_(y.begin(), y.end()), slope_(x.size(), 0.0) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw InvalidConfiguration("monotone cubic needs >= 2 matching points");
  std::vector<double> delta(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) delta[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  slope_[0] = delta[0];
  slope_[n - 1] = delta[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      slope_[i] = 0.0;
      continue;
    }
    // weighted harmonic mean (Fritsch-Butland form), keeps the interpolant monotone
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    const double w0 = 2 * h1 + h0, w1 = h1 + 2 * h0;
    slope_[i] = (w0 + w1) / (w0 / delta[i - 1] + w1 / delta[i]);
  }
}

double MonotoneCubic::operator()(double x) const {
  const std::size_t n = x_.size();
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = it == x_.begin() ? 0 : static_cast<std::size_t>(it - x_.begin()) - 1;
  i = std::min(i, n - 2);
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * y_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * y_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

} // namespace meanfield
