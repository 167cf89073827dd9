#pragma once

#include "meanfield/banded.hpp"
#include "meanfield/radial.hpp"

#include <span>
#include <vector>

namespace meanfield {

// Mixed form of the clamped bilaplacian: unknowns u and w = Delta u,
// interleaved as (u_0, w_0, u_1, w_1, ...). Equations
//
//   w_i - (L u)_i              = s_i      i = 0..n-1   (L: finite volume, u'(1) folded into s)
//   (L w)_i - d_i u_i [+ p_i q.u] = b_i   i = 0..n-2
//   u_{n-1}                    = a
//
// Every coefficient is O(1/h^2), so rounding in residuals stays at eps/h^2
// instead of the eps/h^4 of the assembled fourth-order stencil.
class MixedSystem {
public:
  /// Factorises the system with diagonal shift d (size n, entry n-1 unused).
  explicit MixedSystem(const RadialGrid& grid, std::span<const double> shift = {});

  static BandedMatrix assemble(const RadialGrid& grid, std::span<const double> shift);

  const BandedMatrix& matrix() const { return matrix_; }

  /// Returns u.
  std::vector<double> solve(std::span<const double> s, std::span<const double> b, double a) const;
  /// Same with the rank-one term p_i (q . u) added to the (L w) rows.
  std::vector<double> solve(std::span<const double> s, std::span<const double> b, double a,
                            std::span<const double> p, std::span<const double> q) const;

private:
  std::vector<double> pack(std::span<const double> s, std::span<const double> b, double a) const;

  std::size_t n_;
  BandedMatrix matrix_;
  BandedLU lu_;
};

/// Discrete Delta^2 on radial fields with u(1) = u'(1) = 0 (or prescribed
/// boundary data) and regularity at the centre.
class ClampedBilaplacian {
public:
  explicit ClampedBilaplacian(GridPtr grid);

  const GridPtr& grid_ptr() const { return grid_; }
  const BandedMatrix& matrix() const { return system_.matrix(); }
  const MixedSystem& system() const { return system_; }

  /// Delta^2 u = f at nodes 0..n-2, u(1) = boundary_value, u'(1) = boundary_slope.
  RadialField solve(const RadialField& f, double boundary_value = 0.0,
                    double boundary_slope = 0.0) const;

  /// (L L_g u)_i for i < n-1; entry n-1 carries u(1).
  RadialField apply(const RadialField& u, double boundary_slope = 0.0) const;

private:
  GridPtr grid_;
  MixedSystem system_;
};

} // namespace meanfield
