#ifndef PIEZOGREEN_ORACLE_HPP
#define PIEZOGREEN_ORACLE_HPP

// Angular-integral representation of the Green's function, evaluated by the
// periodic trapezoid rule with a numeric 4x4 inverse at every node:
//
//   G(r) = 1/(8 pi^2 |r|) * int_0^{2pi} T^{-1}(e1 cos a + e2 sin a) da
//
// with (e1, e2) spanning the plane orthogonal to r. It uses the full Cartesian
// tensors only, never the characteristic roots or the scalar kernels, and is
// the reference every closed-form path is checked against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "piezogreen/core.hpp"
#include "piezogreen/greens_matrix.hpp"
#include "piezogreen/kernels.hpp"
#include "piezogreen/linalg.hpp"
#include "piezogreen/material.hpp"

namespace piezogreen {

/// Right-handed orthonormal frame at a field point, e3 = r/|r|.
struct AngularFrame {
  Vec3 e1{};
  Vec3 e2{};
  Vec3 e3{};
  double rho = 0.0;
  double r = 0.0;
};

inline constexpr double kOnAxisTolerance = 1e-12;

inline AngularFrame frame_at(const Vec3& point) {
  const double x = point[0], y = point[1], z = point[2];
  AngularFrame f;
  f.rho = std::hypot(x, y);
  f.r = norm(point);
  if (!(f.r > 0.0) || !std::isfinite(f.r)) throw OriginSingularity("frame_at: field point at the origin");
  f.e3 = {x / f.r, y / f.r, z / f.r};
  if (f.rho / f.r < kOnAxisTolerance) {
    f.e1 = {1.0, 0.0, 0.0};
    f.e2 = cross(f.e3, f.e1);
    return f;
  }
  f.e1 = {-y / f.rho, x / f.rho, 0.0};
  f.e2 = {-z * x / (f.rho * f.r), -z * y / (f.rho * f.r), f.rho / f.r};
  return f;
}

inline constexpr std::size_t kDefaultOracleNodes = 2048;
inline constexpr double kConditionWarning = 1e12;

struct OracleDiagnostics {
  double max_condition = 0.0;
  std::size_t ill_conditioned_nodes = 0;  // nodes above kConditionWarning
};

/// Trapezoid-rule evaluation with `n_nodes` equispaced angles (even, >= 8),
/// summed in ascending node order.
inline GreensMatrix integrate(const CartesianModuli& cm, const Vec3& point, std::size_t n_nodes = kDefaultOracleNodes,
                              OracleDiagnostics* diagnostics = nullptr) {
  if (n_nodes < 8 || n_nodes % 2 != 0) throw PreconditionError("integrate: node count must be even and >= 8");
  const AngularFrame f = frame_at(point);

  Mat4 sum{};
  OracleDiagnostics diag;
  for (std::size_t k = 0; k < n_nodes; ++k) {
    const double alpha = 2.0 * pi * static_cast<double>(k) / static_cast<double>(n_nodes);
    const double ca = std::cos(alpha), sa = std::sin(alpha);
    const Vec3 xi{f.e1[0] * ca + f.e2[0] * sa, f.e1[1] * ca + f.e2[1] * sa, f.e1[2] * ca + f.e2[2] * sa};
    const Mat4 t = assemble_symbol(cm, xi);

    // Jacobi scaling balances the elastic and dielectric blocks.
    std::array<double, 4> d{};
    for (int i = 0; i < 4; ++i) d[i] = 1.0 / std::sqrt(std::abs(t[i][i]));
    Mat4 ts{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) ts[i][j] = d[i] * t[i][j] * d[j];

    const auto inv = linalg::inverse(ts);
    if (!inv || !std::isfinite(d[0] * d[1] * d[2] * d[3])) {
      throw SingularSymbol("integrate: singular symbol matrix at node " + std::to_string(k));
    }
    const double cond = linalg::norm_inf(ts) * linalg::norm_inf(*inv);
    diag.max_condition = std::max(diag.max_condition, cond);
    if (cond > kConditionWarning) ++diag.ill_conditioned_nodes;

    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) sum[i][j] += d[i] * (*inv)[i][j] * d[j];
  }

  GreensMatrix g;
  g.position = point;
  const double w = (2.0 * pi / static_cast<double>(n_nodes)) / (8.0 * pi * pi * f.r);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g.values[i][j] = w * sum[i][j];
  symmetrize(g.values);
  if (diagnostics) *diagnostics = diag;
  return g;
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_ORACLE_HPP
