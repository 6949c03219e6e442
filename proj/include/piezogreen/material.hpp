#ifndef PIEZOGREEN_MATERIAL_HPP
#define PIEZOGREEN_MATERIAL_HPP

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "piezogreen/core.hpp"
#include "piezogreen/linalg.hpp"

namespace piezogreen {

/// The ten independent constants of a hexagonal (6mm) piezoelectric, Voigt
/// form, SI units: stiffness in Pa, piezoelectric stress constants in C/m^2,
/// permittivities in F/m. The 3-axis is the c-axis / poling direction.
///
/// c12 is not stored; it follows from the hexagonal identity c12 = c11 - 2 c66.
struct MaterialModuli {
  double c11 = 0.0;
  double c33 = 0.0;
  double c44 = 0.0;
  double c66 = 0.0;
  double c13 = 0.0;
  double e15 = 0.0;
  double e31 = 0.0;
  double e33 = 0.0;
  double eta11 = 0.0;
  double eta33 = 0.0;

  double c12() const { return c11 - 2.0 * c66; }

  bool is_decoupled() const { return e15 == 0.0 && e31 == 0.0 && e33 == 0.0; }

  /// Same elastic and dielectric constants with the piezoelectric coupling removed.
  MaterialModuli decoupled() const {
    MaterialModuli m = *this;
    m.e15 = m.e31 = m.e33 = 0.0;
    return m;
  }
};

struct ValidationReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }

  std::string summary() const {
    std::string s;
    for (const auto& v : violations) {
      if (!s.empty()) s += "; ";
      s += v;
    }
    return s;
  }
};

/// 6x6 Voigt stiffness (11,22,33,23,13,12 ordering).
inline linalg::Square<6> voigt_stiffness(const MaterialModuli& m) {
  linalg::Square<6> v{};
  v[0][0] = v[1][1] = m.c11;
  v[2][2] = m.c33;
  v[0][1] = v[1][0] = m.c12();
  v[0][2] = v[2][0] = v[1][2] = v[2][1] = m.c13;
  v[3][3] = v[4][4] = m.c44;
  v[5][5] = m.c66;
  return v;
}

/// Checks every invariant of MaterialModuli and lists the ones that fail.
/// Never throws.
inline ValidationReport validate(const MaterialModuli& m) {
  ValidationReport report;
  const std::array<std::pair<const char*, double>, 10> fields{{{"c11", m.c11},
                                                               {"c33", m.c33},
                                                               {"c44", m.c44},
                                                               {"c66", m.c66},
                                                               {"c13", m.c13},
                                                               {"e15", m.e15},
                                                               {"e31", m.e31},
                                                               {"e33", m.e33},
                                                               {"eta11", m.eta11},
                                                               {"eta33", m.eta33}}};
  bool finite = true;
  for (const auto& [name, value] : fields) {
    if (!std::isfinite(value)) {
      report.violations.push_back(std::string(name) + " is not finite");
      finite = false;
    }
  }
  if (!finite) return report;

  if (!(m.eta11 > 0.0)) report.violations.emplace_back("eta11 > 0");
  if (!(m.eta33 > 0.0)) report.violations.emplace_back("eta33 > 0");

  // Necessary and sufficient conditions for the hexagonal 6x6 stiffness to be
  // positive definite, listed individually so the report names the culprit.
  if (!(m.c44 > 0.0)) report.violations.emplace_back("c44 > 0");
  if (!(m.c66 > 0.0)) report.violations.emplace_back("c66 > 0 (c11 > c12)");
  if (!(m.c11 - m.c66 > 0.0)) report.violations.emplace_back("c11 - c66 > 0 (c11 > -c12)");
  if (!(m.c33 > 0.0)) report.violations.emplace_back("c33 > 0");
  if (!(m.c33 * (m.c11 - m.c66) > m.c13 * m.c13)) {
    report.violations.emplace_back("c33 (c11 + c12) > 2 c13^2");
  }
  if (report.ok() && !linalg::is_positive_definite(voigt_stiffness(m))) {
    report.violations.emplace_back("6x6 Voigt stiffness positive definite");
  }
  return report;
}

inline void require_valid(const MaterialModuli& m) {
  const auto report = validate(m);
  if (!report.ok()) throw InvalidMaterial("invalid material: " + report.summary());
}

/// Full index tensors (0-based indices). c[i][j][k][l] = C_ijkl,
/// e[k][i][j] = e_kij (first index is the electric one), eta[i][j].
struct CartesianModuli {
  using Rank4 = std::array<std::array<std::array<std::array<double, 3>, 3>, 3>, 3>;
  using Rank3 = std::array<std::array<std::array<double, 3>, 3>, 3>;

  Rank4 c{};
  Rank3 e{};
  Mat3 eta{};
};

namespace detail {

// Voigt index of the symmetric pair (i, j).
inline int voigt_index(int i, int j) {
  if (i == j) return i;
  const int s = i + j;
  return s == 3 ? 3 : (s == 2 ? 4 : 5);
}

}  // namespace detail

/// Expands the Voigt constants to the full Cartesian tensors. Throws
/// InvalidMaterial if the moduli do not validate.
inline CartesianModuli expand_voigt(const MaterialModuli& m) {
  require_valid(m);
  const auto v = voigt_stiffness(m);

  // Piezoelectric 3x6 matrix of hexagonal 6mm class.
  std::array<std::array<double, 6>, 3> ev{};
  ev[0][4] = m.e15;
  ev[1][3] = m.e15;
  ev[2][0] = m.e31;
  ev[2][1] = m.e31;
  ev[2][2] = m.e33;

  CartesianModuli cm;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int a = detail::voigt_index(i, j);
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) cm.c[i][j][k][l] = v[a][detail::voigt_index(k, l)];
      for (int k = 0; k < 3; ++k) cm.e[k][i][j] = ev[k][a];
    }
  cm.eta[0][0] = cm.eta[1][1] = m.eta11;
  cm.eta[2][2] = m.eta33;
  return cm;
}

/// Applies the orthogonal transformation `r` to every tensor index.
inline CartesianModuli rotated(const CartesianModuli& cm, const Mat3& r) {
  CartesianModuli out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
          double s = 0.0;
          for (int p = 0; p < 3; ++p)
            for (int q = 0; q < 3; ++q)
              for (int u = 0; u < 3; ++u)
                for (int w = 0; w < 3; ++w)
                  s += r[i][p] * r[j][q] * r[k][u] * r[l][w] * cm.c[p][q][u][w];
          out.c[i][j][k][l] = s;
        }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double s = 0.0;
        for (int p = 0; p < 3; ++p)
          for (int q = 0; q < 3; ++q)
            for (int u = 0; u < 3; ++u) s += r[i][p] * r[j][q] * r[k][u] * cm.e[p][q][u];
        out.e[i][j][k] = s;
      }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) s += r[i][p] * r[j][q] * cm.eta[p][q];
      out.eta[i][j] = s;
    }
  return out;
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_MATERIAL_HPP
