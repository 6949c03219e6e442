#ifndef PIEZOGREEN_FIELD_HPP
#define PIEZOGREEN_FIELD_HPP

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "piezogreen/core.hpp"
#include "piezogreen/greens.hpp"

namespace piezogreen {

/// Point source with generalized force F = (K1, K2, K3, -q): a force K [N]
/// and a free charge q [C]. The fourth slot holds minus the charge.
struct GeneralizedSource {
  Vec3 position{};
  Vec4 F{};

  static GeneralizedSource point_force(const Vec3& at, const Vec3& force) {
    return {at, {force[0], force[1], force[2], 0.0}};
  }

  static GeneralizedSource point_charge(const Vec3& at, double charge) { return {at, {0.0, 0.0, 0.0, -charge}}; }
};

/// Generalized displacement U = (u1, u2, u3, phi), u in m, phi in V.
struct FieldSample {
  Vec3 position{};
  Vec4 U{};
};

/// U(r) = sum_s G(r - r_s) F_s, sources summed in input order.
inline std::vector<FieldSample> superpose(const GreensEvaluator& eval, std::span<const GeneralizedSource> sources,
                                          std::span<const Vec3> points) {
  std::vector<FieldSample> out;
  out.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    FieldSample sample;
    sample.position = points[i];
    for (std::size_t s = 0; s < sources.size(); ++s) {
      const Vec3 d = points[i] - sources[s].position;
      if (!(norm(d) > 0.0)) {
        throw OriginSingularity("superpose: point #" + std::to_string(i) + " coincides with source #" +
                                std::to_string(s));
      }
      const GreensMatrix g = eval.eval_cartesian(d);
      for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) sample.U[p] += g.values[p][q] * sources[s].F[q];
    }
    out.push_back(sample);
  }
  return out;
}

inline std::vector<FieldSample> superpose(const MaterialModuli& m, const CharacteristicSpectrum& spectrum,
                                          std::span<const GeneralizedSource> sources, std::span<const Vec3> points) {
  return superpose(GreensEvaluator(m, spectrum), sources, points);
}

/// Cubic lattice origin + spacing * (i, j, k). Samples are stored with k
/// fastest, then j, then i.
struct UniformGrid {
  Vec3 origin{};
  double spacing = 1.0;
  std::array<std::size_t, 3> dims{};

  std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return (i * dims[1] + j) * dims[2] + k; }
  Vec3 point(std::size_t i, std::size_t j, std::size_t k) const {
    return {origin[0] + spacing * static_cast<double>(i), origin[1] + spacing * static_cast<double>(j),
            origin[2] + spacing * static_cast<double>(k)};
  }
};

inline std::vector<Vec3> grid_points(const UniformGrid& grid) {
  std::vector<Vec3> pts;
  pts.reserve(grid.size());
  for (std::size_t i = 0; i < grid.dims[0]; ++i)
    for (std::size_t j = 0; j < grid.dims[1]; ++j)
      for (std::size_t k = 0; k < grid.dims[2]; ++k) pts.push_back(grid.point(i, j, k));
  return pts;
}

/// Post-processing estimates at one interior grid node: strain
/// eps_ij = (d_i u_j + d_j u_i) / 2 and field E_i = -d_i phi, both by second
/// order central differences.
struct GradientSample {
  Vec3 position{};
  std::array<std::size_t, 3> node{};
  Mat3 strain{};
  Vec3 electric_field{};
};

inline std::vector<GradientSample> fd_gradients(const UniformGrid& grid, std::span<const Vec4> values) {
  for (std::size_t n : grid.dims)
    if (n < 3) throw PreconditionError("fd_gradients: need at least 3 nodes per axis");
  if (!(grid.spacing > 0.0)) throw PreconditionError("fd_gradients: spacing must be positive");
  if (values.size() != grid.size()) throw PreconditionError("fd_gradients: value count does not match grid");

  const double inv2h = 0.5 / grid.spacing;
  std::vector<GradientSample> out;
  out.reserve((grid.dims[0] - 2) * (grid.dims[1] - 2) * (grid.dims[2] - 2));
  for (std::size_t i = 1; i + 1 < grid.dims[0]; ++i)
    for (std::size_t j = 1; j + 1 < grid.dims[1]; ++j)
      for (std::size_t k = 1; k + 1 < grid.dims[2]; ++k) {
        const std::array<std::array<std::size_t, 2>, 3> nb{{{grid.index(i + 1, j, k), grid.index(i - 1, j, k)},
                                                            {grid.index(i, j + 1, k), grid.index(i, j - 1, k)},
                                                            {grid.index(i, j, k + 1), grid.index(i, j, k - 1)}}};
        // grad[a][c] = d_a U_c
        std::array<Vec4, 3> grad{};
        for (int a = 0; a < 3; ++a)
          for (int c = 0; c < 4; ++c) grad[a][c] = (values[nb[a][0]][c] - values[nb[a][1]][c]) * inv2h;

        GradientSample s;
        s.position = grid.point(i, j, k);
        s.node = {i, j, k};
        for (int a = 0; a < 3; ++a) {
          for (int b = 0; b < 3; ++b) s.strain[a][b] = 0.5 * (grad[a][b] + grad[b][a]);
          s.electric_field[a] = -grad[a][3];
        }
        out.push_back(s);
      }
  return out;
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_FIELD_HPP
