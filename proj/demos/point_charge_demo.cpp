// Potential and displacement around a point charge in ZnO: potential and u3
// along the c-axis, potential in the basal plane, radial displacement at 45
// degrees elevation (in the basal plane itself it vanishes by symmetry).

#include <cmath>
#include <cstdio>

#include "piezogreen.hpp"

int main() {
  using namespace piezogreen;
  MaterialModuli zno;
  zno.c11 = 209.7e9;
  zno.c33 = 210.9e9;
  zno.c44 = 42.47e9;
  zno.c66 = 44.29e9;
  zno.c13 = 105.1e9;
  zno.e15 = -0.48;
  zno.e31 = -0.573;
  zno.e33 = 1.32;
  zno.eta11 = 8.55 * 8.854187817e-12;
  zno.eta33 = 10.2 * 8.854187817e-12;

  const GreensEvaluator eval(zno);
  const auto charge = GeneralizedSource::point_charge({0.0, 0.0, 0.0}, 1e-12);  // 1 pC
  std::printf("%10s %14s %14s %14s %14s\n", "r [m]", "phi_axis [V]", "u3_axis [m]", "phi_plane [V]", "u1_45deg [m]");
  for (double r : {1e-6, 1e-5, 1e-4, 1e-3}) {
    const std::vector<Vec3> pts{{0.0, 0.0, r}, {r, 0.0, 0.0}, {r * std::sqrt(0.5), 0.0, r * std::sqrt(0.5)}};
    const auto u = superpose(eval, std::span(&charge, 1), pts);
    std::printf("%10.1e %14.6e %14.6e %14.6e %14.6e\n", r, u[0].U[3], u[0].U[2], u[1].U[3], u[2].U[0]);
  }
  return 0;
}
