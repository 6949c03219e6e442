#ifndef PIEZOGREEN_TESTS_RANDOM_MATERIAL_HPP
#define PIEZOGREEN_TESTS_RANDOM_MATERIAL_HPP

#include <cmath>
#include <random>

#include "piezogreen.hpp"

namespace piezogreen::fixtures {

inline constexpr double kEps0 = 8.854187817e-12;

inline MaterialModuli zno() {
  MaterialModuli m;
  m.c11 = 209.7e9;
  m.c33 = 210.9e9;
  m.c44 = 42.47e9;
  m.c66 = 44.29e9;
  m.c13 = 105.1e9;
  m.e15 = -0.48;
  m.e31 = -0.573;
  m.e33 = 1.32;
  m.eta11 = 8.55 * kEps0;
  m.eta33 = 10.2 * kEps0;
  return m;
}

inline MaterialModuli pzt4() {
  MaterialModuli m;
  m.c11 = 139e9;
  m.c33 = 115e9;
  m.c44 = 25.6e9;
  m.c66 = 30.6e9;
  m.c13 = 74.3e9;
  m.e15 = 12.7;
  m.e31 = -5.2;
  m.e33 = 15.1;
  m.eta11 = 6.46e-9;
  m.eta33 = 5.62e-9;
  return m;
}

/// Valid hexagonal material with four well separated characteristic roots.
/// Stiffness ~1e10..1e11 Pa, permittivity 1e-11..1e-8 F/m, coupling up to
/// k^2 ~ 4 (much stronger than any real crystal).
inline MaterialModuli random_material(std::mt19937_64& rng, bool coupled = true) {
  for (;;) {
    MaterialModuli m;
    const double s = 1e10;
    m.c44 = uniform(rng, 1.0, 6.0) * s;
    m.c66 = uniform(rng, 1.0, 6.0) * s;
    m.c11 = m.c66 + uniform(rng, 2.0, 20.0) * s;
    m.c33 = uniform(rng, 3.0, 25.0) * s;
    m.c13 = uniform(rng, -0.3, 0.9) * std::sqrt(m.c33 * (m.c11 - m.c66));
    m.eta11 = std::pow(10.0, uniform(rng, -11.0, -8.0));
    m.eta33 = m.eta11 * std::pow(10.0, uniform(rng, -0.5, 0.5));
    if (coupled) {
      const double e = 2.0 * std::sqrt(m.c44 * m.eta11);
      m.e15 = uniform(rng, -1.0, 1.0) * e;
      m.e31 = uniform(rng, -1.0, 1.0) * e;
      m.e33 = uniform(rng, -1.0, 1.0) * e;
    }
    if (!validate(m).ok()) continue;
    try {
      const auto spec = solve_spectrum(m);
      if (spec.degeneracy_gap < 1e-3) continue;
    } catch (const DegenerateSpectrum&) {
      continue;
    }
    return m;
  }
}

/// Uncoupled material whose elastic roots are real, the domain of the
/// Kroener closed form.
inline MaterialModuli random_kroener_material(std::mt19937_64& rng) {
  for (;;) {
    const auto m = random_material(rng, false);
    try {
      (void)kroener_constants(m);
      return m;
    } catch (const ComplexElasticRoots&) {
    }
  }
}

/// Lifts a 3x3 rotation to the generalized 4x4 space (potential unchanged).
inline Mat4 lift(const Mat3& r) {
  Mat4 out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out[i][j] = r[i][j];
  out[3][3] = 1.0;
  return out;
}

inline Mat4 conjugate(const Mat4& r, const Mat4& g) {
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) s += r[i][k] * g[k][l] * r[j][l];
      out[i][j] = s;
    }
  return out;
}

/// Residual of sum_pq M_pq d_p d_q G by central differences with step h,
/// where (M_pq)_ij = c_ipjq, (M_pq)_i4 = (M_pq)_4i = e_piq, (M_pq)_44 = -eta_pq.
/// Each entry is normalised by the sum of magnitudes of the terms that
/// cancel in it; the return value is the largest normalised entry.
template <typename F>
double operator_residual(const CartesianModuli& cm, F&& g, const Vec3& x, double h) {
  auto shifted = [&](int p, double sp, int q, double sq) {
    Vec3 y = x;
    y[p] += sp;
    y[q] += sq;
    return g(y);
  };
  // d2[p][q] = d_p d_q G
  std::array<std::array<Mat4, 3>, 3> d2{};
  const Mat4 g0 = g(x);
  for (int p = 0; p < 3; ++p)
    for (int q = p; q < 3; ++q) {
      Mat4 d{};
      if (p == q) {
        const Mat4 a = shifted(p, h, p, 0.0), b = shifted(p, -h, p, 0.0);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) d[i][j] = (a[i][j] - 2.0 * g0[i][j] + b[i][j]) / (h * h);
      } else {
        const Mat4 pp = shifted(p, h, q, h), pm = shifted(p, h, q, -h);
        const Mat4 mp = shifted(p, -h, q, h), mm = shifted(p, -h, q, -h);
        for (int i = 0; i < 4; ++i)
          for (int j = 0; j < 4; ++j) d[i][j] = (pp[i][j] - pm[i][j] - mp[i][j] + mm[i][j]) / (4.0 * h * h);
      }
      d2[p][q] = d2[q][p] = d;
    }
  auto m_entry = [&](int p, int q, int i, int k) -> double {
    if (i < 3 && k < 3) return cm.c[i][p][k][q];
    if (i < 3) return cm.e[p][i][q];
    if (k < 3) return cm.e[p][k][q];
    return -cm.eta[p][q];
  };
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double sum = 0.0, mag = 0.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          for (int k = 0; k < 4; ++k) {
            const double t = m_entry(p, q, i, k) * d2[p][q][k][j];
            sum += t;
            mag += std::abs(t);
          }
      // The generalized operator applied to G gives -delta (identity) at the
      // origin only; away from it every entry must vanish.
      if (mag > 0.0) worst = std::max(worst, std::abs(sum) / mag);
    }
  return worst;
}

}  // namespace piezogreen::fixtures

#endif  // PIEZOGREEN_TESTS_RANDOM_MATERIAL_HPP
