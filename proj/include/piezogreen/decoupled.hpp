#ifndef PIEZOGREEN_DECOUPLED_HPP
#define PIEZOGREEN_DECOUPLED_HPP

// Closed forms of the zero-coupling limit (e = 0): the hexagonal elastic
// Green's tensor in Kroener's notation and the point-charge potential of a
// uniaxial dielectric. They are written out independently of the 4x4
// evaluator and serve as its reference in that limit.
//
// The normalisation used here is
//   E_l = 4 pi c11 c44 c66 prod_{j != l, j <= 3} (a_j - a_l);
// the quadrature tests pin down both its magnitude and its sign.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "piezogreen/core.hpp"
#include "piezogreen/greens.hpp"
#include "piezogreen/kernels.hpp"
#include "piezogreen/material.hpp"
#include "piezogreen/spectrum.hpp"

namespace piezogreen {

/// Elastic roots a_1..a_3 are not all real for this (valid) material.
class ComplexElasticRoots : public Error {
 public:
  using Error::Error;
};

struct KroenerConstants {
  std::array<double, 3> roots{};  // a1 = c44/c66, a2 < a3 from the quadratic
  std::array<double, 3> A{};      // script-A_l
  std::array<double, 3> B{};
  std::array<double, 3> C{};
  std::array<double, 3> D{};
  std::array<double, 3> E{};
};

namespace detail {

inline void require_decoupled(const MaterialModuli& m, const char* who) {
  if (!m.is_decoupled()) throw PreconditionError(std::string(who) + ": requires e15 = e31 = e33 = 0");
}

// Roots of c11 c44 a^2 + (c13^2 + 2 c13 c44 - c11 c33) a + c33 c44 = 0.
inline std::array<Complex, 2> elastic_quadratic_roots(const MaterialModuli& m) {
  const double qa = m.c11 * m.c44;
  const double qb = m.c13 * m.c13 + 2.0 * m.c13 * m.c44 - m.c11 * m.c33;
  const double qc = m.c33 * m.c44;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc >= 0.0) {
    const double q = -0.5 * (qb + std::copysign(std::sqrt(disc), qb));
    const double r1 = q / qa, r2 = qc / q;
    return {Complex(std::min(r1, r2)), Complex(std::max(r1, r2))};
  }
  const Complex z(-qb / (2.0 * qa), std::sqrt(-disc) / (2.0 * qa));
  return {std::conj(z), z};
}

}  // namespace detail

inline KroenerConstants kroener_constants(const MaterialModuli& m) {
  detail::require_decoupled(m, "kroener_constants");
  require_valid(m);
  const auto quad = detail::elastic_quadratic_roots(m);
  if (quad[0].imag() != 0.0) throw ComplexElasticRoots("elastic roots a2, a3 are complex for this material");

  KroenerConstants k;
  k.roots = {m.c44 / m.c66, quad[0].real(), quad[1].real()};
  for (double a : k.roots)
    if (!(a > 0.0)) throw ComplexElasticRoots("elastic root is not positive");
  const double gap = std::min({std::abs(k.roots[0] - k.roots[1]), std::abs(k.roots[0] - k.roots[2]),
                               std::abs(k.roots[1] - k.roots[2])}) /
                     std::max({k.roots[0], k.roots[1], k.roots[2]});
  if (!(gap >= kDegeneracyThreshold)) throw DegenerateSpectrum("elastic roots a1, a2, a3 are not distinct");

  const double c11 = m.c11, c33 = m.c33, c44 = m.c44, c66 = m.c66, c13 = m.c13;
  for (int l = 0; l < 3; ++l) {
    const double a = k.roots[l];
    double prod = 1.0;
    for (int j = 0; j < 3; ++j)
      if (j != l) prod *= k.roots[j] - a;
    k.E[l] = 4.0 * pi * c11 * c44 * c66 * prod;
    k.A[l] = ((c66 - c11) * (c33 - a * c44) + (c13 + c44) * (c13 + c44)) / k.E[l];
    k.B[l] = (c11 * c44 * a * a + (c13 * c13 + 2.0 * c13 * c44 - c11 * c33) * a + c33 * c44) / k.E[l];
    k.C[l] = (c44 - a * c66) * (c13 + c44) / k.E[l];
    k.D[l] = (c44 - a * c66) * (c44 - a * c11) / k.E[l];
  }
  return k;
}

/// Elastic Green's tensor of the hexagonal medium, off the symmetry axis.
inline Mat3 kroener_tensor(const KroenerConstants& k, const Vec3& point) {
  const double x = point[0], y = point[1], z = point[2];
  const double rho2 = x * x + y * y;
  if (!(rho2 > 0.0)) throw PreconditionError("kroener_tensor: formula is undefined on the symmetry axis");
  const double rho4 = rho2 * rho2;
  const double z2 = z * z;
  Mat3 g{};
  for (int l = 0; l < 3; ++l) {
    const double a = k.roots[l];
    const double w = 1.0 / std::sqrt(a * rho2 + z2);
    const double s2 = a * rho2 + z2;
    g[0][0] += w * (k.A[l] * (x * x * z2 - y * y * s2) / rho4 + k.B[l]);
    g[1][1] += w * (k.A[l] * (y * y * z2 - x * x * s2) / rho4 + k.B[l]);
    g[0][1] += w * k.A[l] * x * y * (a * rho2 + 2.0 * z2) / rho4;
    g[0][2] += w * k.C[l] * x * z / rho2;
    g[1][2] += w * k.C[l] * y * z / rho2;
    g[2][2] += w * k.D[l];
  }
  g[1][0] = g[0][1];
  g[2][0] = g[0][2];
  g[2][1] = g[1][2];
  return g;
}

inline Mat3 kroener_tensor(const MaterialModuli& m, const Vec3& point) {
  return kroener_tensor(kroener_constants(m), point);
}

/// Potential of a unit generalized source -q = 1 in a uniaxial dielectric:
/// -1 / (4 pi eta11 sqrt(a4 rho^2 + z^2)), a4 = eta33 / eta11.
inline double poisson_kernel(double eta11, double eta33, const Vec3& point) {
  if (!(eta11 > 0.0) || !(eta33 > 0.0)) throw PreconditionError("poisson_kernel: permittivities must be positive");
  if (!(norm(point) > 0.0)) throw OriginSingularity("poisson_kernel: field point at the origin");
  const double a4 = eta33 / eta11;
  const double rho2 = point[0] * point[0] + point[1] * point[1];
  return -1.0 / (4.0 * pi * eta11 * std::sqrt(a4 * rho2 + point[2] * point[2]));
}

struct DecoupledCheck {
  std::string name;
  double residual = 0.0;
  double tolerance = 0.0;
  bool passed() const { return residual <= tolerance; }
};

struct DecoupledReport {
  std::vector<DecoupledCheck> checks;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const DecoupledCheck& c) { return c.passed(); });
  }
};

/// Verifies, for a material without piezoelectric coupling, that the 4x4
/// machinery falls apart into its elastic and dielectric limits:
///  - the full spectrum equals {c44/c66, quadratic roots, eta33/eta11};
///  - the evaluator's G_j4 (j = 1..3) vanish;
///  - the l = 4 root contributes nothing to the elastic kernels;
///  - roots l = 1..3 contribute nothing to G44;
///  - Lambda_4(-a4) / E_4 = -1 / (4 pi eta11).
inline DecoupledReport decoupled_consistency(const MaterialModuli& m, double tolerance = 1e-10) {
  detail::require_decoupled(m, "decoupled_consistency");
  require_valid(m);

  const auto quad = detail::elastic_quadratic_roots(m);
  const std::array<Complex, 4> a{Complex(m.c44 / m.c66), quad[0], quad[1], Complex(m.eta33 / m.eta11)};
  const double lead = -m.eta11 * m.c11 * m.c44;
  std::array<Complex, 4> script_e{};
  for (int l = 0; l < 4; ++l) {
    Complex prod = 1.0;
    for (int j = 0; j < 4; ++j)
      if (j != l) prod *= a[j] - a[l];
    script_e[l] = 4.0 * pi * m.c66 * lead * prod;
  }
  const KernelSet k(m);

  DecoupledReport report;

  {
    const auto spectrum = solve_spectrum(m);
    double worst = 0.0;
    double scale = 0.0;
    for (const auto& v : a) scale = std::max(scale, std::abs(v));
    for (const auto& expected : a) {
      double best = INFINITY;
      for (const auto& got : spectrum.roots) best = std::min(best, std::abs(got - expected));
      worst = std::max(worst, best / scale);
    }
    report.checks.push_back({"spectrum equals {c44/c66, elastic quadratic roots, eta33/eta11}", worst, tolerance});
  }

  {
    const GreensEvaluator eval(m);
    const std::array<Vec3, 6> points{{{1.0, 0.0, 0.5}, {0.3, -0.7, 0.2}, {-0.4, 0.9, -1.1},
                                      {2.0, 1.0, 0.0}, {0.05, 0.02, 1.0}, {-1.0, -1.0, -1.0}}};
    double worst = 0.0;
    for (const auto& p : points) {
      const auto g = eval.eval_cartesian(p);
      for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(g.values[j][3]) / entry_scale(g.values, j, 3));
    }
    report.checks.push_back({"G_j4 = 0 for j = 1..3", worst, tolerance});
  }

  {
    using Kernel = Complex (KernelSet::*)(Complex) const;
    const std::array<Kernel, 5> elastic{&KernelSet::Lambda_bperp, &KernelSet::Lambda_b, &KernelSet::Gamma_b,
                                        &KernelSet::Gamma_bc, &KernelSet::Lambda_c};
    double worst = 0.0;
    for (Kernel f : elastic) {
      double ref = 0.0;
      for (int l = 0; l < 3; ++l) ref = std::max(ref, std::abs((k.*f)(-a[l]) / script_e[l]));
      const double v = std::abs((k.*f)(-a[3]) / script_e[3]);
      worst = std::max(worst, ref > 0.0 ? v / ref : v);
    }
    report.checks.push_back({"root l = 4 absent from the elastic block", worst, tolerance});
  }

  const Complex l4 = k.Lambda_4(-a[3]) / script_e[3];
  {
    double worst = 0.0;
    for (int l = 0; l < 3; ++l) worst = std::max(worst, std::abs(k.Lambda_4(-a[l]) / script_e[l]) / std::abs(l4));
    report.checks.push_back({"roots l = 1..3 absent from G44", worst, tolerance});
  }

  {
    const double expected = -1.0 / (4.0 * pi * m.eta11);
    report.checks.push_back({"Lambda_4(-a4) / E_4 = -1 / (4 pi eta11)", std::abs(l4 - expected) / std::abs(expected),
                             tolerance});
  }
  return report;
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_DECOUPLED_HPP
