#ifndef PIEZOGREEN_KERNELS_HPP
#define PIEZOGREEN_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <limits>

#include "piezogreen/core.hpp"
#include "piezogreen/linalg.hpp"
#include "piezogreen/material.hpp"
#include "piezogreen/spectrum.hpp"

namespace piezogreen {

/// Scalar kernels of the symbol matrix and its cofactors in the hexagonal
/// frame (e_b, e_bperp, e_c, e_4), as functions of a = xi_b^2 / xi_c^2 with
/// xi_c = 1. Everything is evaluated in complex arithmetic so that complex
/// roots pass through unchanged.
///
/// T_bc and t_b4 carry a factor sqrt(a); only their squares and their
/// product are exposed, and the off-diagonal cofactors Lambda_bc, Lambda_b4
/// only through Gamma_bc = Lambda_bc / sqrt(a), Gamma_b4 = Lambda_b4 / sqrt(a).
/// No branch of sqrt(a) is ever taken here.
class KernelSet {
 public:
  explicit KernelSet(const MaterialModuli& m) : m_(m), p_(cubic_coefficients(m)) {}

  const MaterialModuli& moduli() const { return m_; }
  const CubicCoefficients& coefficients() const { return p_; }

  // Symbol components.
  Complex T_bperp(Complex a) const { return m_.c66 * a + m_.c44; }
  Complex T_b(Complex a) const { return m_.c11 * a + m_.c44; }
  Complex T_bc_sq(Complex a) const { return cs() * cs() * a; }
  Complex T_c(Complex a) const { return m_.c44 * a + m_.c33; }
  Complex t_b4_sq(Complex a) const { return es() * es() * a; }
  Complex t_c4(Complex a) const { return m_.e15 * a + m_.e33; }
  Complex tau(Complex a) const { return -(m_.eta11 * a + m_.eta33); }
  /// T_bc * t_b4, free of sqrt(a).
  Complex T_bc_t_b4(Complex a) const { return cs() * es() * a; }

  /// Basal-perpendicular cofactor, composed from the symbol components.
  Complex Lambda_bperp(Complex a) const {
    const Complex tc4 = t_c4(a);
    return tau(a) * (T_b(a) * T_c(a) - T_bc_sq(a)) -
           (tc4 * tc4 * T_b(a) - 2.0 * tc4 * T_bc_t_b4(a) + t_b4_sq(a) * T_c(a));
  }

  Complex Lambda_b(Complex a) const {
    const Complex e = m_.e15 * a + m_.e33;
    return -T_bperp(a) * ((m_.eta11 * a + m_.eta33) * (m_.c44 * a + m_.c33) + e * e);
  }

  Complex Lambda_c(Complex a) const {
    return -T_bperp(a) * ((m_.eta11 * a + m_.eta33) * (m_.c11 * a + m_.c44) + a * es() * es());
  }

  Complex Lambda_c4(Complex a) const {
    return -T_bperp(a) * ((m_.c11 * a + m_.c44) * (m_.e15 * a + m_.e33) - a * cs() * es());
  }

  Complex Lambda_4(Complex a) const {
    const double k = m_.c11 * m_.c33 - 2.0 * m_.c13 * m_.c44 - m_.c13 * m_.c13;
    return T_bperp(a) * (a * a * (m_.c11 * m_.c44) + a * k + m_.c33 * m_.c44);
  }

  /// (Lambda_bperp - Lambda_b) / a. The last term carries a minus sign; this
  /// is what the cofactor expansion gives.
  Complex Gamma_b(Complex a) const {
    const Complex tc = T_c(a);
    const Complex tc4 = t_c4(a);
    const Complex t = tau(a);
    return (m_.c11 - m_.c66) * (tc * t - tc4 * tc4) - cs() * cs() * t + 2.0 * cs() * es() * tc4 - es() * es() * tc;
  }

  Complex Gamma_bc(Complex a) const {
    return T_bperp(a) * (es() * (m_.e15 * a + m_.e33) + (m_.eta11 * a + m_.eta33) * cs());
  }

  Complex Gamma_b4(Complex a) const {
    return T_bperp(a) * (cs() * (m_.e15 * a + m_.e33) - (m_.c44 * a + m_.c33) * es());
  }

  /// A a^3 + B a^2 + C a + D from the closed-form coefficients.
  Complex P(Complex a) const { return ((p_.A * a + p_.B) * a + p_.C) * a + p_.D; }

 private:
  double cs() const { return m_.c13 + m_.c44; }
  double es() const { return m_.e31 + m_.e15; }

  MaterialModuli m_;
  CubicCoefficients p_;
};

inline KernelSet kernels_from(const MaterialModuli& m) {
  require_valid(m);
  return KernelSet(m);
}

/// Symbol matrix of the electroelastic operator at wave vector xi:
/// T_ij = C_ipjq xi_p xi_q, t_i = e_piq xi_p xi_q, tau = -eta_pq xi_p xi_q,
/// arranged as [[T, t], [t^T, tau]].
inline Mat4 assemble_symbol(const CartesianModuli& cm, const Vec3& xi) {
  Mat4 out{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) s += cm.c[i][p][j][q] * xi[p] * xi[q];
      out[i][j] = s;
    }
    double t = 0.0;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) t += cm.e[p][i][q] * xi[p] * xi[q];
    out[i][3] = out[3][i] = t;
  }
  double tau = 0.0;
  for (int p = 0; p < 3; ++p)
    for (int q = 0; q < 3; ++q) tau -= cm.eta[p][q] * xi[p] * xi[q];
  out[3][3] = tau;
  return out;
}

/// Determinant of a symbol matrix. Each row and column is first scaled by
/// 1/sqrt|diagonal| so that the elastic (~1e11) and dielectric (~1e-11)
/// blocks are balanced before elimination.
inline double symbol_determinant(const Mat4& t) {
  std::array<double, 4> d{};
  for (int i = 0; i < 4; ++i) d[i] = std::abs(t[i][i]) > 0.0 ? 1.0 / std::sqrt(std::abs(t[i][i])) : 1.0;
  Mat4 scaled{};
  double undo = 1.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) scaled[i][j] = d[i] * t[i][j] * d[j];
    undo /= d[i] * d[i];
  }
  return linalg::determinant(scaled) * undo;
}

/// Relative residual |det T(sqrt(a), 0, 1) - c66 (a + c44/c66) P(a)| for a >= 0.
inline double determinant_identity_check(const MaterialModuli& m, double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw PreconditionError("determinant_identity_check: need finite a >= 0");
  const auto cm = expand_voigt(m);
  const double direct = symbol_determinant(assemble_symbol(cm, {std::sqrt(a), 0.0, 1.0}));
  const auto p = cubic_coefficients(m);
  const double factor = m.c66 * a + m.c44;
  const double factored = factor * (((p.A * a + p.B) * a + p.C) * a + p.D);
  const double scale =
      std::abs(factor) * (std::abs(p.A) * a * a * a + std::abs(p.B) * a * a + std::abs(p.C) * a + std::abs(p.D));
  return std::abs(direct - factored) / std::max(scale, std::numeric_limits<double>::min());
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_KERNELS_HPP
