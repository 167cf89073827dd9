#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace meanfield {

/// Square band matrix with kl sub- and ku super-diagonals.
class BandedMatrix {
public:
  BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku);

  std::size_t size() const { return n_; }
  std::size_t lower() const { return kl_; }
  std::size_t upper() const { return ku_; }

  bool in_band(std::size_t i, std::size_t j) const {
    return j + kl_ >= i && j <= i + ku_;
  }
  double get(std::size_t i, std::size_t j) const;
  /// Adds v at (i, j); (i, j) must lie inside the band.
  void add(std::size_t i, std::size_t j, double v);
  void set(std::size_t i, std::size_t j, double v);

  std::vector<double> multiply(std::span<const double> x) const;
  double row_abs_sum(std::size_t i) const;

private:
  friend class BandedLU;
  double& ref(std::size_t i, std::size_t j) { return data_[i * width_ + (j + kl_ - i)]; }
  double cref(std::size_t i, std::size_t j) const { return data_[i * width_ + (j + kl_ - i)]; }

  std::size_t n_, kl_, ku_, width_;
  std::vector<double> data_;
};

/// LU factorisation with partial pivoting of a BandedMatrix. The upper
/// bandwidth of U grows to kl + ku.
class BandedLU {
public:
  /// Throws SingularMatrix when a zero pivot is met.
  explicit BandedLU(const BandedMatrix& a);

  std::size_t size() const { return n_; }
  void solve_in_place(std::span<double> b) const;
  std::vector<double> solve(std::span<const double> b) const;

private:
  std::size_t n_, kl_, ku_, width_;
  std::vector<double> lu_;   // row-major, columns i-kl .. i+kl+ku
  std::vector<std::size_t> piv_;
  std::vector<double> mult_; // n * kl multipliers

  double& at(std::size_t i, std::size_t j) { return lu_[i * width_ + (j + kl_ - i)]; }
  double at(std::size_t i, std::size_t j) const { return lu_[i * width_ + (j + kl_ - i)]; }
};

} // namespace meanfield
