#ifndef PIEZOGREEN_SPECTRUM_HPP
#define PIEZOGREEN_SPECTRUM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>

#include "piezogreen/core.hpp"
#include "piezogreen/material.hpp"

namespace piezogreen {

/// Coefficients of P(a) = A a^3 + B a^2 + C a + D, the basal-perpendicular
/// cofactor of the symbol matrix at xi_b^2 = a, xi_c = 1.
struct CubicCoefficients {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double D = 0.0;
};

inline CubicCoefficients cubic_coefficients(const MaterialModuli& m) {
  const double c11 = m.c11, c33 = m.c33, c44 = m.c44, c13 = m.c13;
  const double e15 = m.e15, e31 = m.e31, e33 = m.e33;
  const double n11 = m.eta11, n33 = m.eta33;
  const double es = e31 + e15;
  const double cs = c13 + c44;
  const double k = c11 * c33 - 2.0 * c13 * c44 - c13 * c13;

  CubicCoefficients p;
  p.A = -n11 * c11 * c44 - c11 * e15 * e15;
  p.B = -n33 * c11 * c44 - n11 * k - c44 * e15 * e15 - 2.0 * c11 * e15 * e33 + 2.0 * cs * e15 * es -
        c44 * es * es;
  p.C = -n33 * k - n11 * c33 * c44 - 2.0 * e15 * e33 * c44 - e33 * e33 * c11 + 2.0 * e33 * es * cs -
        c33 * es * es;
  p.D = -n33 * c33 * c44 - e33 * e33 * c44;
  return p;
}

/// Scale factors that bring the three families of moduli to order one.
/// The characteristic roots are invariant under
/// (C, e, eta) -> (C / elastic, e / piezo, eta / dielectric) because
/// piezo^2 = elastic * dielectric.
struct ModuliScales {
  double elastic = 1.0;
  double piezo = 1.0;
  double dielectric = 1.0;
};

inline ModuliScales scales_of(const MaterialModuli& m) {
  ModuliScales s;
  s.elastic = std::pow(m.c11 * m.c33 * m.c44 * m.c66, 0.25);
  s.dielectric = std::sqrt(m.eta11 * m.eta33);
  s.piezo = std::sqrt(s.elastic * s.dielectric);
  return s;
}

inline MaterialModuli rescaled(const MaterialModuli& m, const ModuliScales& s) {
  MaterialModuli r;
  r.c11 = m.c11 / s.elastic;
  r.c33 = m.c33 / s.elastic;
  r.c44 = m.c44 / s.elastic;
  r.c66 = m.c66 / s.elastic;
  r.c13 = m.c13 / s.elastic;
  r.e15 = m.e15 / s.piezo;
  r.e31 = m.e31 / s.piezo;
  r.e33 = m.e33 / s.piezo;
  r.eta11 = m.eta11 / s.dielectric;
  r.eta33 = m.eta33 / s.dielectric;
  return r;
}

namespace detail {

inline Complex monic_cubic(const std::array<double, 3>& c, Complex x) {
  return ((x + c[0]) * x + c[1]) * x + c[2];
}

inline Complex monic_cubic_derivative(const std::array<double, 3>& c, Complex x) {
  return (3.0 * x + 2.0 * c[0]) * x + c[1];
}

// Newton steps on the full cubic, kept only while the residual decreases.
inline Complex polish(const std::array<double, 3>& c, Complex x) {
  Complex fx = monic_cubic(c, x);
  for (int it = 0; it < 8 && fx != 0.0; ++it) {
    const Complex d = monic_cubic_derivative(c, x);
    if (d == 0.0) break;
    const Complex y = x - fx / d;
    const Complex fy = monic_cubic(c, y);
    if (!(std::abs(fy) < std::abs(fx))) break;
    x = y;
    fx = fy;
  }
  return x;
}

// One real root of x^3 + c0 x^2 + c1 x + c2 by safeguarded Newton on a
// Cauchy-bound bracket.
inline double real_root(const std::array<double, 3>& c) {
  auto f = [&](double x) { return ((x + c[0]) * x + c[1]) * x + c[2]; };
  auto df = [&](double x) { return (3.0 * x + 2.0 * c[0]) * x + c[1]; };
  const double bound = 1.0 + std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2])});
  double lo = -bound, hi = bound;
  double x = 0.0;
  for (int it = 0; it < 400; ++it) {
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) lo = x;
    else hi = x;
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(next) ||
        hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))) {
      return next;
    }
    x = next;
  }
  return x;
}

}  // namespace detail

/// Roots of c3 x^3 + c2 x^2 + c1 x + c0 with real coefficients. Non-real roots
/// come out as exact conjugates.
inline std::array<Complex, 3> solve_cubic(double c3, double c2, double c1, double c0) {
  if (c3 == 0.0 || !std::isfinite(c3)) throw PreconditionError("solve_cubic: leading coefficient must be nonzero");
  const std::array<double, 3> mc{c2 / c3, c1 / c3, c0 / c3};

  const double x0 = detail::polish(mc, detail::real_root(mc)).real();
  // Deflate to x^2 + b x + c.
  const double b = mc[0] + x0;
  const double c = (std::abs(x0) > 1.0) ? -mc[2] / x0 : mc[1] + x0 * b;
  const double disc = b * b - 4.0 * c;

  std::array<Complex, 3> roots;
  roots[0] = x0;
  if (disc >= 0.0) {
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    const double r1 = q;
    const double r2 = (q != 0.0) ? c / q : 0.0;
    roots[1] = detail::polish(mc, Complex(r1, 0.0)).real();
    roots[2] = detail::polish(mc, Complex(r2, 0.0)).real();
  } else {
    Complex z(-0.5 * b, 0.5 * std::sqrt(-disc));
    z = detail::polish(mc, z);
    roots[1] = z;
    roots[2] = std::conj(z);
  }
  return roots;
}

inline double degeneracy_gap(const std::array<Complex, 4>& roots) {
  double gap = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    scale = std::max(scale, std::abs(roots[i]));
    for (std::size_t j = i + 1; j < roots.size(); ++j) gap = std::min(gap, std::abs(roots[i] - roots[j]));
  }
  return scale > 0.0 ? gap / scale : 0.0;
}

inline constexpr double kDegeneracyThreshold = 1e-8;

/// First-order rounding error of a computed simple root x of
/// c3 x^3 + c2 x^2 + c1 x + c0. Near a multiple root |P'(x)| collapses and the
/// bound exceeds the spread of the cluster, which is how clusters that
/// rounding has split apart are still recognised.
inline double root_error_bound(double c3, double c2, double c1, double c0, Complex x) {
  const double ax = std::abs(x);
  const double size = ((std::abs(c3) * ax + std::abs(c2)) * ax + std::abs(c1)) * ax + std::abs(c0);
  const double slope = std::abs((3.0 * c3 * x + 2.0 * c2) * x + c1);
  constexpr double u = 8.0 * std::numeric_limits<double>::epsilon();
  return slope > 0.0 ? u * size / slope : std::numeric_limits<double>::infinity();
}

/// Coefficients (SI) and the four characteristic roots A_1..A_4.
/// roots[0] = c44/c66 is the basal-shear root; roots[1..3] solve
/// A a^3 - B a^2 + C a - D = 0 and are sorted by real, then imaginary part.
struct CharacteristicSpectrum {
  CubicCoefficients coefficients;
  std::array<Complex, 4> roots{};
  double degeneracy_gap = 0.0;
};

/// Builds the spectrum. Throws DegenerateSpectrum when two roots are closer
/// than `threshold` relative to the largest one.
inline CharacteristicSpectrum solve_spectrum(const MaterialModuli& m, double threshold = kDegeneracyThreshold) {
  require_valid(m);
  CharacteristicSpectrum spec;
  spec.coefficients = cubic_coefficients(m);

  const auto scaled = cubic_coefficients(rescaled(m, scales_of(m)));
  auto cubic = solve_cubic(scaled.A, -scaled.B, scaled.C, -scaled.D);
  std::sort(cubic.begin(), cubic.end(), [](const Complex& a, const Complex& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });

  spec.roots = {Complex(m.c44 / m.c66, 0.0), cubic[0], cubic[1], cubic[2]};
  spec.degeneracy_gap = degeneracy_gap(spec.roots);

  std::array<double, 4> bound{std::numeric_limits<double>::epsilon() * spec.roots[0].real()};
  for (std::size_t l = 1; l < 4; ++l)
    bound[l] = root_error_bound(scaled.A, -scaled.B, scaled.C, -scaled.D, spec.roots[l]);
  bool unresolved = false;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = i + 1; j < 4; ++j) unresolved |= std::abs(spec.roots[i] - spec.roots[j]) <= bound[i] + bound[j];

  if (!(spec.degeneracy_gap >= threshold) || unresolved) {
    std::ostringstream os;
    os.precision(3);
    os << "characteristic roots nearly coincide (relative gap " << spec.degeneracy_gap;
    if (unresolved) os << ", within rounding error";
    os << ", threshold " << threshold << "); the closed form assumes four distinct roots";
    throw DegenerateSpectrum(os.str());
  }
  return spec;
}

/// The four zeros s_l = (w_l - r) / (w_l + r), w_l = sqrt(A_l rho^2 + z^2)
/// (principal branch), of the contour integrand inside the unit disk.
inline std::array<Complex, 4> residue_zero_diagnostic(const CharacteristicSpectrum& spec, double rho, double z) {
  const double r = std::hypot(rho, z);
  if (!(r > 0.0)) throw OriginSingularity("residue_zero_diagnostic: (rho, z) = (0, 0)");
  std::array<Complex, 4> s;
  for (std::size_t l = 0; l < 4; ++l) {
    const Complex w = std::sqrt(spec.roots[l] * (rho * rho) + z * z);
    s[l] = (w - r) / (w + r);
  }
  return s;
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_SPECTRUM_HPP
