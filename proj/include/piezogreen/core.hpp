#ifndef PIEZOGREEN_CORE_HPP
#define PIEZOGREEN_CORE_HPP

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace piezogreen {

using Complex = std::complex<double>;
using Vec3 = std::array<double, 3>;
using Vec4 = std::array<double, 4>;
using Mat3 = std::array<Vec3, 3>;
using Mat4 = std::array<Vec4, 4>;

inline constexpr double pi = std::numbers::pi;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Moduli that fail validation (non-finite, non-positive permittivity,
/// stiffness not positive definite).
class InvalidMaterial : public Error {
 public:
  using Error::Error;
};

/// Two characteristic roots closer than the refusal threshold. The closed form
/// assumes four distinct roots.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

/// Evaluation requested at r = 0 (or a field point on top of a source).
class OriginSingularity : public Error {
 public:
  using Error::Error;
};

/// Symbol matrix could not be inverted at a quadrature node.
class SingularSymbol : public Error {
 public:
  using Error::Error;
};

/// An internal cross-check (realness, symmetry) failed beyond tolerance.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Malformed material, source or point file.
class ParseError : public Error {
 public:
  using Error::Error;
};

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }

inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

inline bool all_finite(const Vec3& a) {
  return std::isfinite(a[0]) && std::isfinite(a[1]) && std::isfinite(a[2]);
}

/// Rotation by `angle` about the 3-axis.
inline Mat3 rotation_about_z(double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {{{c, -s, 0.0}, {s, c, 0.0}, {0.0, 0.0, 1.0}}};
}

inline Vec3 apply(const Mat3& m, const Vec3& v) {
  return {dot(m[0], v), dot(m[1], v), dot(m[2], v)};
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_CORE_HPP
