#ifndef PIEZOGREEN_SAMPLING_HPP
#define PIEZOGREEN_SAMPLING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "piezogreen/core.hpp"

namespace piezogreen {

/// Seed used by `validate` when none is given.
inline constexpr std::uint64_t kDefaultSeed = 20260917;

/// Uniform double in [0, 1) from the top 53 bits of the generator. Unlike
/// std::uniform_real_distribution this is the same on every standard library.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng); }

/// Direction uniform on the sphere, radius log-uniform in [r_min, r_max].
inline Vec3 random_point(std::mt19937_64& rng, double r_min = 0.1, double r_max = 10.0) {
  const double cz = uniform(rng, -1.0, 1.0);
  const double phi = uniform(rng, 0.0, 2.0 * pi);
  const double r = r_min * std::pow(r_max / r_min, unit_uniform(rng));
  const double sz = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  return {r * sz * std::cos(phi), r * sz * std::sin(phi), r * cz};
}

inline std::vector<Vec3> random_points(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Vec3> pts(n);
  for (auto& p : pts) p = random_point(rng);
  return pts;
}

}  // namespace piezogreen

#endif  // PIEZOGREEN_SAMPLING_HPP
