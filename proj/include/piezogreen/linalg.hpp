#ifndef PIEZOGREEN_LINALG_HPP
#define PIEZOGREEN_LINALG_HPP

// Dense kernels for the fixed small sizes used here (4x4 symbols, 6x6 Voigt
// stiffness). Nothing in this header knows about materials.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>

namespace piezogreen::linalg {

template <std::size_t N>
using Square = std::array<std::array<double, N>, N>;

template <std::size_t N>
Square<N> identity() {
  Square<N> id{};
  for (std::size_t i = 0; i < N; ++i) id[i][i] = 1.0;
  return id;
}

template <std::size_t N>
double norm_inf(const Square<N>& a) {
  double best = 0.0;
  for (const auto& row : a) {
    double s = 0.0;
    for (double v : row) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

/// LU factorization with partial pivoting, stored in place (unit lower part
/// implicit). `sign` is the permutation parity.
template <std::size_t N>
struct LU {
  Square<N> lu{};
  std::array<std::size_t, N> perm{};
  double sign = 1.0;
  bool singular = false;
};

template <std::size_t N>
LU<N> lu_factor(const Square<N>& a) {
  LU<N> f;
  f.lu = a;
  for (std::size_t i = 0; i < N; ++i) f.perm[i] = i;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t piv = k;
    double best = std::abs(f.lu[k][k]);
    for (std::size_t i = k + 1; i < N; ++i) {
      if (std::abs(f.lu[i][k]) > best) {
        best = std::abs(f.lu[i][k]);
        piv = i;
      }
    }
    if (best == 0.0 || !std::isfinite(best)) {
      f.singular = true;
      return f;
    }
    if (piv != k) {
      std::swap(f.lu[piv], f.lu[k]);
      std::swap(f.perm[piv], f.perm[k]);
      f.sign = -f.sign;
    }
    for (std::size_t i = k + 1; i < N; ++i) {
      const double m = f.lu[i][k] / f.lu[k][k];
      f.lu[i][k] = m;
      for (std::size_t j = k + 1; j < N; ++j) f.lu[i][j] -= m * f.lu[k][j];
    }
  }
  return f;
}

template <std::size_t N>
double determinant(const Square<N>& a) {
  const auto f = lu_factor(a);
  if (f.singular) return 0.0;
  double d = f.sign;
  for (std::size_t i = 0; i < N; ++i) d *= f.lu[i][i];
  return d;
}

template <std::size_t N>
std::optional<Square<N>> inverse(const Square<N>& a) {
  const auto f = lu_factor(a);
  if (f.singular) return std::nullopt;
  Square<N> inv{};
  for (std::size_t col = 0; col < N; ++col) {
    std::array<double, N> x{};
    for (std::size_t i = 0; i < N; ++i) {
      double s = (f.perm[i] == col) ? 1.0 : 0.0;
      for (std::size_t j = 0; j < i; ++j) s -= f.lu[i][j] * x[j];
      x[i] = s;
    }
    for (std::size_t ii = N; ii-- > 0;) {
      double s = x[ii];
      for (std::size_t j = ii + 1; j < N; ++j) s -= f.lu[ii][j] * x[j];
      x[ii] = s / f.lu[ii][ii];
    }
    for (std::size_t i = 0; i < N; ++i) inv[i][col] = x[i];
  }
  return inv;
}

/// True when `a` (assumed symmetric) admits a Cholesky factorization with
/// strictly positive pivots.
template <std::size_t N>
bool is_positive_definite(const Square<N>& a) {
  Square<N> l{};
  for (std::size_t j = 0; j < N; ++j) {
    double d = a[j][j];
    for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
    if (!(d > 0.0)) return false;
    l[j][j] = std::sqrt(d);
    for (std::size_t i = j + 1; i < N; ++i) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      l[i][j] = s / l[j][j];
    }
  }
  return true;
}

}  // namespace piezogreen::linalg

#endif  // PIEZOGREEN_LINALG_HPP
