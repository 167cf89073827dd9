#include "meanfield/banded.hpp"

#include "meanfield/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace meanfield {

BandedMatrix::BandedMatrix(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), width_(kl + ku + 1), data_(n * (kl + ku + 1), 0.0) {}

double BandedMatrix::get(std::size_t i, std::size_t j) const {
  return in_band(i, j) ? cref(i, j) : 0.0;
}

void BandedMatrix::add(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_ || !in_band(i, j))
    throw InvalidConfiguration("band matrix entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ") outside the band");
  ref(i, j) += v;
}

void BandedMatrix::set(std::size_t i, std::size_t j, double v) {
  if (i >= n_ || j >= n_ || !in_band(i, j))
    throw InvalidConfiguration("band matrix entry (" + std::to_string(i) + "," +
                               std::to_string(j) + ") outside the band");
  ref(i, j) = v;
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > kl_ ? i - kl_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + ku_);
    double s = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) s += cref(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double BandedMatrix::row_abs_sum(std::size_t i) const {
  const std::size_t lo = i > kl_ ? i - kl_ : 0;
  const std::size_t hi = std::min(n_ - 1, i + ku_);
  double s = 0.0;
  for (std::size_t j = lo; j <= hi; ++j) s += std::abs(cref(i, j));
  return s;
}

BandedLU::BandedLU(const BandedMatrix& a)
    : n_(a.n_), kl_(a.kl_), ku_(a.ku_), width_(2 * a.kl_ + a.ku_ + 1),
      lu_(a.n_ * (2 * a.kl_ + a.ku_ + 1), 0.0), piv_(a.n_), mult_(a.n_ * a.kl_, 0.0) {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t lo = i > kl_ ? i - kl_ : 0;
    const std::size_t hi = std::min(n_ - 1, i + ku_);
    for (std::size_t j = lo; j <= hi; ++j) at(i, j) = a.cref(i, j);
  }

  double scale = 0.0;
  for (double v : lu_) scale = std::max(scale, std::abs(v));

  for (std::size_t k = 0; k < n_; ++k) {
    const std::size_t last = std::min(n_ - 1, k + kl_);
    std::size_t p = k;
    double best = std::abs(at(k, k));
    for (std::size_t i = k + 1; i <= last; ++i) {
      if (std::abs(at(i, k)) > best) {
        best = std::abs(at(i, k));
        p = i;
      }
    }
    if (best == 0.0 || best <= scale * 1e-300)
      throw SingularMatrix("banded factorisation: zero pivot in column " + std::to_string(k));
    piv_[k] = p;
    const std::size_t jmax = std::min(n_ - 1, k + kl_ + ku_);
    if (p != k)
      for (std::size_t j = k; j <= jmax; ++j) std::swap(at(k, j), at(p, j));
    const double pivot = at(k, k);
    for (std::size_t i = k + 1; i <= last; ++i) {
      const double m = at(i, k) / pivot;
      mult_[k * kl_ + (i - k - 1)] = m;
      at(i, k) = 0.0;
      if (m == 0.0) continue;
      for (std::size_t j = k + 1; j <= jmax; ++j) at(i, j) -= m * at(k, j);
    }
  }
}

void BandedLU::solve_in_place(std::span<double> b) const {
  for (std::size_t k = 0; k < n_; ++k) {
    if (piv_[k] != k) std::swap(b[k], b[piv_[k]]);
    const std::size_t last = std::min(n_ - 1, k + kl_);
    for (std::size_t i = k + 1; i <= last; ++i) b[i] -= mult_[k * kl_ + (i - k - 1)] * b[k];
  }
  for (std::size_t k = n_; k-- > 0;) {
    const std::size_t jmax = std::min(n_ - 1, k + kl_ + ku_);
    double s = b[k];
    for (std::size_t j = k + 1; j <= jmax; ++j) s -= at(k, j) * b[j];
    b[k] = s / at(k, k);
  }
}

std::vector<double> BandedLU::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

} // namespace meanfield
