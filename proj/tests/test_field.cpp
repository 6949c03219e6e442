#include <gtest/gtest.h>

#include <random>

#include "piezogreen.hpp"
#include "support/random_material.hpp"

using namespace piezogreen;

namespace {

// Uncoupled material with isotropic permittivity; elastic roots stay distinct
// from eta33/eta11 = 1.
MaterialModuli isotropic_dielectric() {
  auto m = fixtures::pzt4().decoupled();
  m.eta33 = m.eta11;
  return m;
}

double rel4(const Vec4& a, const Vec4& b) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a[i] - b[i]) / std::max(std::abs(b[i]), 1e-300));
  return worst;
}

}  // namespace

TEST(Field, PointChargePotentialSign) {
  const auto m = isotropic_dielectric();
  const GreensEvaluator eval(m);
  const double q = 1.0;
  const auto src = GeneralizedSource::point_charge({0, 0, 0}, q);
  EXPECT_EQ(src.F[3], -q);
  const std::vector<Vec3> pts{{0.3, -0.4, 1.2}};
  const auto u = superpose(eval, std::span(&src, 1), pts);
  const double r = norm(pts[0]);
  EXPECT_NEAR(u[0].U[3], q / (4.0 * pi * m.eta11 * r), 1e-13 * q / (4.0 * pi * m.eta11 * r));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(u[0].U[i], 0.0);
}

TEST(Field, UnitForceGivesOracleColumn) {
  const GreensEvaluator eval(fixtures::zno());
  const auto src = GeneralizedSource::point_force({0, 0, 0}, {1, 0, 0});
  const Vec3 p{0.7, 0.2, -0.5};
  const auto u = superpose(eval, std::span(&src, 1), std::span(&p, 1))[0].U;
  const auto g = integrate(eval.cartesian_moduli(), p);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(u[i], g(i, 0), 1e-12 * std::sqrt(std::abs(g(i, i) * g(0, 0))));
}

TEST(Field, LinearityAndTranslation) {
  const GreensEvaluator eval(fixtures::pzt4());
  std::mt19937_64 rng(103);
  std::vector<GeneralizedSource> a, b, mix;
  const double alpha = 2.5, beta = -0.75;
  for (int s = 0; s < 3; ++s) {
    const Vec3 pos = random_point(rng, 0.1, 1.0);
    Vec4 fa{}, fb{};
    for (int i = 0; i < 3; ++i) fa[i] = uniform(rng, -1, 1), fb[i] = uniform(rng, -1, 1);
    fa[3] = uniform(rng, -1e-9, 1e-9);
    fb[3] = uniform(rng, -1e-9, 1e-9);
    a.push_back({pos, fa});
    b.push_back({pos, fb});
    Vec4 fm{};
    for (int i = 0; i < 4; ++i) fm[i] = alpha * fa[i] + beta * fb[i];
    mix.push_back({pos, fm});
  }
  const auto pts = random_points(20, 107);
  const auto ua = superpose(eval, a, pts), ub = superpose(eval, b, pts), um = superpose(eval, mix, pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    Vec4 expected{};
    for (int i = 0; i < 4; ++i) expected[i] = alpha * ua[k].U[i] + beta * ub[k].U[i];
    EXPECT_LT(rel4(um[k].U, expected), 1e-12);
  }

  const Vec3 t{0.3, -2.0, 1.7};
  auto shifted_src = mix;
  for (auto& s : shifted_src) s.position = s.position + t;
  auto shifted_pts = pts;
  for (auto& p : shifted_pts) p = p + t;
  const auto us = superpose(eval, shifted_src, shifted_pts);
  for (std::size_t k = 0; k < pts.size(); ++k) EXPECT_LT(rel4(us[k].U, um[k].U), 1e-9);
}

TEST(Field, Reciprocity) {
  const GreensEvaluator eval(fixtures::zno());
  std::mt19937_64 rng(109);
  for (int n = 0; n < 20; ++n) {
    const Vec3 r1 = random_point(rng), r2 = random_point(rng);
    const int p = static_cast<int>(rng() % 4), q = static_cast<int>(rng() % 4);
    GeneralizedSource sq{r2, {}}, sp{r1, {}};
    sq.F[q] = 1.0;
    sp.F[p] = 1.0;
    const double up = superpose(eval, std::span(&sq, 1), std::span(&r1, 1))[0].U[p];
    const double uq = superpose(eval, std::span(&sp, 1), std::span(&r2, 1))[0].U[q];
    EXPECT_LE(std::abs(up - uq), 1e-10 * std::max(std::abs(up), std::abs(uq))) << n;
  }
}

TEST(Field, PointOnSourceIsNamed) {
  const GreensEvaluator eval(fixtures::zno());
  const std::vector<GeneralizedSource> src{{{1, 0, 0}, {1, 0, 0, 0}}, {{0, 1, 0}, {0, 1, 0, 0}}};
  const std::vector<Vec3> pts{{0, 0, 1}, {0, 1, 0}};
  try {
    (void)superpose(eval, src, pts);
    FAIL();
  } catch (const OriginSingularity& e) {
    EXPECT_NE(std::string(e.what()).find("point #1"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("source #1"), std::string::npos);
  }
}

TEST(Field, GradientsOfLinearFieldsAreExact) {
  const UniformGrid grid{{-1.0, 0.5, 2.0}, 0.25, {4, 3, 5}};
  std::vector<Vec4> values;
  for (const auto& p : grid_points(grid)) values.push_back({2.0 * p[1], 3.0 * p[0], -p[2], 7.0 * p[2] - 1.0});
  const auto grads = fd_gradients(grid, values);
  ASSERT_EQ(grads.size(), 2u * 1u * 3u);
  for (const auto& g : grads) {
    EXPECT_NEAR(g.strain[0][1], 2.5, 1e-13);
    EXPECT_NEAR(g.strain[1][0], 2.5, 1e-13);
    EXPECT_NEAR(g.strain[2][2], -1.0, 1e-13);
    EXPECT_NEAR(g.strain[0][0], 0.0, 1e-13);
    EXPECT_NEAR(g.electric_field[2], -7.0, 1e-13);
    EXPECT_NEAR(g.electric_field[0], 0.0, 1e-13);
  }
  std::vector<Vec4> constant(grid.size(), Vec4{1, 2, 3, 4});
  for (const auto& g : fd_gradients(grid, constant)) {
    for (const auto& row : g.strain)
      for (double v : row) EXPECT_EQ(v, 0.0);
    for (double v : g.electric_field) EXPECT_EQ(v, 0.0);
  }
}

TEST(Field, PointChargeFieldConvergesQuadratically) {
  const auto m = fixtures::pzt4().decoupled();
  const GreensEvaluator eval(m);
  const auto src = GeneralizedSource::point_charge({0, 0, 0}, 1e-9);
  const Vec3 centre{0.4, 0.3, 0.5};
  // Analytic E = -grad phi with phi = q / (4 pi eta11 sqrt(a4 rho^2 + z^2)).
  const double a4 = m.eta33 / m.eta11;
  const double w2 = a4 * (centre[0] * centre[0] + centre[1] * centre[1]) + centre[2] * centre[2];
  const double k = 1e-9 / (4.0 * pi * m.eta11) / std::pow(w2, 1.5);
  const Vec3 exact{k * a4 * centre[0], k * a4 * centre[1], k * centre[2]};
  auto error = [&](double h) {
    const UniformGrid grid{{centre[0] - h, centre[1] - h, centre[2] - h}, h, {3, 3, 3}};
    const auto pts = grid_points(grid);
    std::vector<Vec4> values;
    for (const auto& s : superpose(eval, std::span(&src, 1), pts)) values.push_back(s.U);
    const auto g = fd_gradients(grid, values);
    EXPECT_EQ(g.size(), 1u);
    return norm(g[0].electric_field - exact) / norm(exact);
  };
  const double e1 = error(0.02), e2 = error(0.01);
  EXPECT_LT(e1, 1e-2);
  EXPECT_NEAR(std::log2(e1 / e2), 2.0, 0.1);
}

TEST(Field, GradientPreconditions) {
  const UniformGrid small{{0, 0, 0}, 1.0, {3, 2, 3}};
  EXPECT_THROW(fd_gradients(small, std::vector<Vec4>(small.size())), PreconditionError);
  const UniformGrid ok{{0, 0, 0}, 1.0, {3, 3, 3}};
  EXPECT_THROW(fd_gradients(ok, std::vector<Vec4>(5)), PreconditionError);
  const UniformGrid flat{{0, 0, 0}, 0.0, {3, 3, 3}};
  EXPECT_THROW(fd_gradients(flat, std::vector<Vec4>(27)), PreconditionError);
}
