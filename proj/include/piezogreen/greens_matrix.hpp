#ifndef PIEZOGREEN_GREENS_MATRIX_HPP
#define PIEZOGREEN_GREENS_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "piezogreen/core.hpp"

namespace piezogreen {

/// Real symmetric 4x4 electroelastic Green's function at one field point.
/// Indices 0..2 are displacement and point force, index 3 is potential and
/// the generalized source -q. Block units: m/N, m/C, V/N and V/C.
struct GreensMatrix {
  Vec3 position{};
  Mat4 values{};

  double operator()(std::size_t p, std::size_t q) const { return values[p][q]; }
};

/// Upper-triangle entries in row-major order: G11 G12 G13 G14 G22 G23 G24 G33 G34 G44.
inline std::array<double, 10> upper_triangle(const GreensMatrix& g) {
  std::array<double, 10> out{};
  std::size_t n = 0;
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = p; q < 4; ++q) out[n++] = g.values[p][q];
  return out;
}

/// Natural scale of entry (p, q): sqrt(|G_pp G_qq|). Mixed-unit blocks are
/// compared against it, never against each other.
inline double entry_scale(const Mat4& g, std::size_t p, std::size_t q) {
  return std::sqrt(std::abs(g[p][p]) * std::abs(g[q][q]));
}

/// Largest entrywise |a - b| / sqrt(|b_pp b_qq|), with `b` as the reference.
inline double relative_deviation(const Mat4& a, const Mat4& b) {
  double worst = 0.0;
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = 0; q < 4; ++q) {
      const double s = entry_scale(b, p, q);
      const double d = std::abs(a[p][q] - b[p][q]);
      worst = std::max(worst, s > 0.0 ? d / s : (d == 0.0 ? 0.0 : INFINITY));
    }
  return worst;
}

inline double relative_deviation(const GreensMatrix& a, const GreensMatrix& b) {
  return relative_deviation(a.values, b.values);
}

/// Largest |g_pq - g_qp| / sqrt(|g_pp g_qq|).
inline double asymmetry(const Mat4& g) {
  double worst = 0.0;
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = p + 1; q < 4; ++q) {
      const double s = entry_scale(g, p, q);
      if (s > 0.0) worst = std::max(worst, std::abs(g[p][q] - g[q][p]) / s);
    }
  return worst;
}

inline constexpr double kSymmetryTolerance = 1e-10;

/// Replaces g by (g + g^T)/2. Throws ConsistencyError when the asymmetry
/// exceeds `tolerance`; this is a check, not a repair.
inline void symmetrize(Mat4& g, double tolerance = kSymmetryTolerance) {
  if (asymmetry(g) > tolerance) throw ConsistencyError("Green's matrix asymmetric beyond tolerance");
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = p + 1; q < 4; ++q) g[p][q] = g[q][p] = 0.5 * (g[p][q] + g[q][p]);
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_GREENS_MATRIX_HPP
