#include "meanfield/clamped.hpp"

#include "meanfield/errors.hpp"

#include <algorithm>

namespace meanfield {

namespace {

constexpr std::size_t u_col(std::size_t i) { return 2 * i; }
constexpr std::size_t w_col(std::size_t i) { return 2 * i + 1; }

} // namespace

BandedMatrix MixedSystem::assemble(const RadialGrid& grid, std::span<const double> shift) {
  const std::size_t n = grid.size();
  const auto vol = grid.cell_volumes();
  const auto k = grid.flux_coefficients();
  BandedMatrix m(2 * n, 3, 3);
  for (std::size_t i = 0; i < n; ++i) {
    const double km = i > 0 ? k[i - 1] : 0.0;
    const double kp = i + 1 < n ? k[i] : 0.0;
    const double inv = 1.0 / vol[i];

    // w_i - (L u)_i
    const std::size_t rw = w_col(i);
    m.add(rw, w_col(i), 1.0);
    m.add(rw, u_col(i), (km + kp) * inv);
    if (i > 0) m.add(rw, u_col(i - 1), -km * inv);
    if (i + 1 < n) m.add(rw, u_col(i + 1), -kp * inv);

    const std::size_t rl = u_col(i);
    if (i + 1 == n) {
      m.add(rl, u_col(i), 1.0);
      continue;
    }
    // (L w)_i - d_i u_i
    m.add(rl, w_col(i), -(km + kp) * inv);
    if (i > 0) m.add(rl, w_col(i - 1), km * inv);
    m.add(rl, w_col(i + 1), kp * inv);
    if (!shift.empty()) m.add(rl, u_col(i), -shift[i]);
  }
  return m;
}

MixedSystem::MixedSystem(const RadialGrid& grid, std::span<const double> shift)
    : n_(grid.size()), matrix_(assemble(grid, shift)), lu_(matrix_) {}

std::vector<double> MixedSystem::pack(std::span<const double> s, std::span<const double> b,
                                      double a) const {
  std::vector<double> rhs(2 * n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    rhs[w_col(i)] = s.empty() ? 0.0 : s[i];
    if (i + 1 < n_) rhs[u_col(i)] = b.empty() ? 0.0 : b[i];
  }
  rhs[u_col(n_ - 1)] = a;
  return rhs;
}

std::vector<double> MixedSystem::solve(std::span<const double> s, std::span<const double> b,
                                       double a) const {
  auto x = pack(s, b, a);
  lu_.solve_in_place(x);
  std::vector<double> u(n_);
  for (std::size_t i = 0; i < n_; ++i) u[i] = x[u_col(i)];
  return u;
}

std::vector<double> MixedSystem::solve(std::span<const double> s, std::span<const double> b,
                                       double a, std::span<const double> p,
                                       std::span<const double> q) const {
  // Sherman-Morrison: (B + P q^T) x = r.
  auto x = pack(s, b, a);
  lu_.solve_in_place(x);
  std::vector<double> z(2 * n_, 0.0);
  for (std::size_t i = 0; i + 1 < n_; ++i) z[u_col(i)] = p[i];
  lu_.solve_in_place(z);
  double qx = 0.0, qz = 0.0;
  for (std::size_t j = 0; j < n_; ++j) {
    qx += q[j] * x[u_col(j)];
    qz += q[j] * z[u_col(j)];
  }
  const double denom = 1.0 + qz;
  if (denom == 0.0) throw SingularMatrix("rank-one update makes the linearised system singular");
  const double t = qx / denom;
  std::vector<double> u(n_);
  for (std::size_t i = 0; i < n_; ++i) u[i] = x[u_col(i)] - t * z[u_col(i)];
  return u;
}

ClampedBilaplacian::ClampedBilaplacian(GridPtr grid)
    : grid_(std::move(grid)), system_(*grid_) {}

RadialField ClampedBilaplacian::solve(const RadialField& f, double boundary_value,
                                      double boundary_slope) const {
  if (f.size() != grid_->size())
    throw InvalidConfiguration("right-hand side lives on a different grid");
  const std::size_t n = grid_->size();
  std::vector<double> s(n, 0.0);
  s[n - 1] = boundary_slope / grid_->cell_volumes()[n - 1];
  auto u = system_.solve(s, f.values(), boundary_value);
  return RadialField(grid_, std::move(u));
}

RadialField ClampedBilaplacian::apply(const RadialField& u, double boundary_slope) const {
  const std::size_t n = grid_->size();
  const auto w = clamped_laplacian(u, boundary_slope);
  const auto vol = grid_->cell_volumes();
  const auto k = grid_->flux_coefficients();
  std::vector<double> out(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double fp = k[i] * (w[i + 1] - w[i]);
    const double fm = i > 0 ? k[i - 1] * (w[i] - w[i - 1]) : 0.0;
    out[i] = (fp - fm) / vol[i];
  }
  out[n - 1] = u[n - 1];
  return RadialField(grid_, std::move(out));
}

} // namespace meanfield
