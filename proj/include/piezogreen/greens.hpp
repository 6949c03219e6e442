#ifndef PIEZOGREEN_GREENS_HPP
#define PIEZOGREEN_GREENS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <exception>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "piezogreen/core.hpp"
#include "piezogreen/greens_matrix.hpp"
#include "piezogreen/kernels.hpp"
#include "piezogreen/material.hpp"
#include "piezogreen/oracle.hpp"
#include "piezogreen/spectrum.hpp"

namespace piezogreen {

/// Components on the cylindrical frame (e_rho, e_phi, e_z, e_4).
struct CylindricalComponents {
  double G_phiphi = 0.0;
  double G_rhorho = 0.0;
  double G_rhoz = 0.0;
  double G_zz = 0.0;
  double G_rho4 = 0.0;
  double G_z4 = 0.0;
  double G_44 = 0.0;
  double rho = 0.0;
  double z = 0.0;
};

/// Assembles the Cartesian matrix at azimuth atan2(y, x). On the axis
/// (x = y = 0) the azimuth is taken as zero; there G_phiphi = G_rhorho and
/// the mixed components vanish, so the choice does not matter.
inline GreensMatrix assemble_cartesian(const CylindricalComponents& c, double x, double y) {
  const double rho = std::hypot(x, y);
  const double ux = rho > 0.0 ? x / rho : 1.0;
  const double uy = rho > 0.0 ? y / rho : 0.0;
  const Vec4 er{ux, uy, 0.0, 0.0};
  const Vec4 ephi{-uy, ux, 0.0, 0.0};
  const Vec4 ez{0.0, 0.0, 1.0, 0.0};
  const Vec4 e4{0.0, 0.0, 0.0, 1.0};

  GreensMatrix g;
  g.position = {x, y, c.z};
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      g.values[p][q] = c.G_phiphi * ephi[p] * ephi[q] + c.G_rhorho * er[p] * er[q] +
                       c.G_rhoz * (er[p] * ez[q] + ez[p] * er[q]) + c.G_zz * ez[p] * ez[q] +
                       c.G_rho4 * (er[p] * e4[q] + e4[p] * er[q]) + c.G_z4 * (ez[p] * e4[q] + e4[p] * ez[q]) +
                       c.G_44 * e4[p] * e4[q];
    }
  return g;
}

struct EvaluatorOptions {
  /// Below this rho/r the oracle is used instead of the root sum.
  double axis_tolerance = 1e-4;
  std::size_t fallback_nodes = kDefaultOracleNodes;
  /// Largest tolerated |Im| of an l-sum relative to the sum of |terms|.
  double realness_tolerance = 1e-10;
};

/// Closed-form evaluator of the 4x4 Green's function of an infinite hexagonal
/// piezoelectric. Holds the spectrum and the kernels already evaluated at
/// a = -A_l and divided by
///
///   E_l = 4 pi c66 A prod_{j != l} (A_j - A_l),
///
/// so one evaluation is four complex square roots plus a few products.
/// Immutable after construction; concurrent evaluations are independent.
///
/// Terms of the root sum that carry 1/rho^2 or 1/rho^4 are rewritten with the
/// identity sum_l Gamma(-A_l)/E_l = 0 (a third divided difference of a
/// quadratic), which lets 1/s_l be replaced by 1/s_l - 1/r and s_l by s_l - r,
/// both O(rho^2). The result is free of cancellation near the axis.
class GreensEvaluator {
 public:
  explicit GreensEvaluator(const MaterialModuli& m, EvaluatorOptions options = {})
      : GreensEvaluator(m, solve_spectrum(m), options) {}

  GreensEvaluator(const MaterialModuli& m, const CharacteristicSpectrum& spectrum, EvaluatorOptions options = {})
      : moduli_(m), spectrum_(spectrum), options_(options), cartesian_(expand_voigt(m)) {
    if (!(spectrum.degeneracy_gap >= kDegeneracyThreshold) ||
        !(degeneracy_gap(spectrum.roots) >= kDegeneracyThreshold)) {
      throw DegenerateSpectrum("characteristic roots nearly coincide; the closed form assumes four distinct roots");
    }
    const KernelSet k(m);
    const double lead = spectrum.coefficients.A;
    for (std::size_t l = 0; l < 4; ++l) {
      const Complex al = spectrum.roots[l];
      Complex prod = 1.0;
      for (std::size_t j = 0; j < 4; ++j)
        if (j != l) prod *= spectrum.roots[j] - al;
      const Complex inv_e = 1.0 / (4.0 * pi * m.c66 * lead * prod);
      const Complex a = -al;
      RootTerm& t = terms_[l];
      t.A = al;
      t.lambda_bperp = k.Lambda_bperp(a) * inv_e;
      t.lambda_b = k.Lambda_b(a) * inv_e;
      t.lambda_c = k.Lambda_c(a) * inv_e;
      t.lambda_c4 = k.Lambda_c4(a) * inv_e;
      t.lambda_4 = k.Lambda_4(a) * inv_e;
      t.gamma_b = k.Gamma_b(a) * inv_e;
      t.gamma_bc = k.Gamma_bc(a) * inv_e;
      t.gamma_b4 = k.Gamma_b4(a) * inv_e;
    }
  }

  const MaterialModuli& moduli() const { return moduli_; }
  const CharacteristicSpectrum& spectrum() const { return spectrum_; }
  const EvaluatorOptions& options() const { return options_; }
  const CartesianModuli& cartesian_moduli() const { return cartesian_; }

  /// True when `point` lies inside the near-axis cone handled by the oracle.
  bool uses_oracle_at(const Vec3& point) const {
    const double r = norm(point);
    return std::hypot(point[0], point[1]) < options_.axis_tolerance * r;
  }

  GreensMatrix eval_cartesian(const Vec3& point) const {
    check_point(point);
    return uses_oracle_at(point) ? oracle(point) : closed_form(point);
  }

  CylindricalComponents eval_cylindrical(double rho, double z) const {
    if (!(rho >= 0.0)) throw PreconditionError("eval_cylindrical: rho must be >= 0");
    const Vec3 point{rho, 0.0, z};
    check_point(point);
    if (!uses_oracle_at(point)) return closed_form_cylindrical(rho, z);
    const GreensMatrix g = oracle(point);
    CylindricalComponents c;
    c.rho = rho;
    c.z = z;
    c.G_rhorho = g.values[0][0];
    c.G_phiphi = g.values[1][1];
    c.G_rhoz = g.values[0][2];
    c.G_zz = g.values[2][2];
    c.G_rho4 = g.values[0][3];
    c.G_z4 = g.values[2][3];
    c.G_44 = g.values[3][3];
    return c;
  }

  /// Root-sum evaluation at any off-origin point, bypassing the near-axis switch.
  GreensMatrix closed_form(const Vec3& point) const {
    check_point(point);
    const double x = point[0], y = point[1], z = point[2];
    const double rho2 = x * x + y * y;
    const double rho = std::sqrt(rho2);
    const double r = norm(point);
    const double ux = rho > 0.0 ? x / rho : 1.0;
    const double uy = rho > 0.0 ? y / rho : 0.0;
    const double z2 = z * z;

    enum { k11, k12, k13, k14, k22, k23, k24, k33, k34, k44, kCount };
    std::array<Accumulator, kCount> acc{};
    for (const RootTerm& t : terms_) {
      const Complex s = std::sqrt(t.A * rho2 + z2);
      const Complex inv_s = 1.0 / s;
      const Complex q = (1.0 - t.A) / (s * r * (r + s));  // (1/s - 1/r) / rho^2
      const Complex p = (t.A - 1.0) / (s + r);            // (s - r) / rho^2
      acc[k11].add(-t.gamma_b * (ux * ux * z2 * q - uy * uy * p) + t.lambda_bperp * inv_s);
      acc[k22].add(-t.gamma_b * (uy * uy * z2 * q - ux * ux * p) + t.lambda_bperp * inv_s);
      acc[k12].add(-t.gamma_b * (ux * uy) * (t.A * inv_s + 2.0 * z2 * q));
      acc[k13].add(-t.gamma_bc * (x * z) * q);
      acc[k23].add(-t.gamma_bc * (y * z) * q);
      acc[k33].add(t.lambda_c * inv_s);
      acc[k14].add(-t.gamma_b4 * (x * z) * q);
      acc[k24].add(-t.gamma_b4 * (y * z) * q);
      acc[k34].add(t.lambda_c4 * inv_s);
      acc[k44].add(t.lambda_4 * inv_s);
    }

    GreensMatrix g;
    g.position = point;
    const std::array<std::array<int, 2>, kCount> slot{
        {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}};
    for (int n = 0; n < kCount; ++n) {
      const double v = acc[n].real(options_.realness_tolerance, point);
      g.values[slot[n][0]][slot[n][1]] = g.values[slot[n][1]][slot[n][0]] = v;
    }
    return g;
  }

  CylindricalComponents closed_form_cylindrical(double rho, double z) const {
    if (!(rho >= 0.0)) throw PreconditionError("closed_form_cylindrical: rho must be >= 0");
    const Vec3 point{rho, 0.0, z};
    check_point(point);
    const double rho2 = rho * rho;
    const double r = norm(point);
    const double z2 = z * z;

    std::array<Accumulator, 7> acc{};
    for (const RootTerm& t : terms_) {
      const Complex s = std::sqrt(t.A * rho2 + z2);
      const Complex inv_s = 1.0 / s;
      const Complex q = (1.0 - t.A) / (s * r * (r + s));
      acc[0].add(t.lambda_b * inv_s + z2 * t.gamma_b * q);
      acc[1].add(t.lambda_bperp * inv_s - z2 * t.gamma_b * q);
      acc[2].add(-(z * rho) * t.gamma_bc * q);
      acc[3].add(t.lambda_c * inv_s);
      acc[4].add(-(z * rho) * t.gamma_b4 * q);
      acc[5].add(t.lambda_c4 * inv_s);
      acc[6].add(t.lambda_4 * inv_s);
    }
    const double tol = options_.realness_tolerance;
    CylindricalComponents c;
    c.rho = rho;
    c.z = z;
    c.G_phiphi = acc[0].real(tol, point);
    c.G_rhorho = acc[1].real(tol, point);
    c.G_rhoz = acc[2].real(tol, point);
    c.G_zz = acc[3].real(tol, point);
    c.G_rho4 = acc[4].real(tol, point);
    c.G_z4 = acc[5].real(tol, point);
    c.G_44 = acc[6].real(tol, point);
    return c;
  }

  /// Quadrature evaluation with this evaluator's fallback node count.
  GreensMatrix oracle(const Vec3& point) const { return integrate(cartesian_, point, options_.fallback_nodes); }

  /// Same values as calling eval_cartesian point by point (bit for bit).
  /// threads = 0 uses the hardware concurrency.
  std::vector<GreensMatrix> eval_batch(std::span<const Vec3> points, unsigned threads = 1) const {
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!all_finite(points[i]) || !(norm(points[i]) > 0.0)) {
        throw OriginSingularity("eval_batch: point #" + std::to_string(i) + " is at the origin or not finite");
      }
    }
    std::vector<GreensMatrix> out(points.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, points.size())));
    if (threads <= 1) {
      for (std::size_t i = 0; i < points.size(); ++i) out[i] = eval_cartesian(points[i]);
      return out;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (points.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          const std::size_t lo = t * chunk;
          const std::size_t hi = std::min(points.size(), lo + chunk);
          for (std::size_t i = lo; i < hi; ++i) out[i] = eval_cartesian(points[i]);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return out;
  }

 private:
  struct RootTerm {
    Complex A;
    Complex lambda_bperp, lambda_b, lambda_c, lambda_c4, lambda_4;
    Complex gamma_b, gamma_bc, gamma_b4;
  };

  struct Accumulator {
    Complex sum{};
    double magnitude = 0.0;

    void add(Complex v) {
      sum += v;
      magnitude += std::abs(v);
    }

    double real(double tolerance, const Vec3& point) const {
      if (std::abs(sum.imag()) > tolerance * magnitude) {
        throw ConsistencyError("root sum not real at (" + std::to_string(point[0]) + ", " + std::to_string(point[1]) +
                               ", " + std::to_string(point[2]) + ")");
      }
      return sum.real();
    }
  };

  static void check_point(const Vec3& point) {
    if (!all_finite(point)) throw PreconditionError("field point not finite");
    if (!(norm(point) > 0.0)) throw OriginSingularity("Green's function is singular at the origin");
  }

  MaterialModuli moduli_;
  CharacteristicSpectrum spectrum_;
  EvaluatorOptions options_;
  CartesianModuli cartesian_;
  std::array<RootTerm, 4> terms_{};
};

inline CylindricalComponents eval_cylindrical(const MaterialModuli& m, const CharacteristicSpectrum& spectrum,
                                              double rho, double z) {
  return GreensEvaluator(m, spectrum).eval_cylindrical(rho, z);
}

inline GreensMatrix eval_cartesian(const MaterialModuli& m, const CharacteristicSpectrum& spectrum, double x,
                                   double y, double z) {
  return GreensEvaluator(m, spectrum).eval_cartesian({x, y, z});
}

inline std::vector<GreensMatrix> eval_batch(const MaterialModuli& m, const CharacteristicSpectrum& spectrum,
                                            std::span<const Vec3> points, unsigned threads = 1) {
  return GreensEvaluator(m, spectrum).eval_batch(points, threads);
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_GREENS_HPP
