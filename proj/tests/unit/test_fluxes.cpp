#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "mppfv/fluxes.hpp"
#include "mppfv/metrics.hpp"
#include "support/oracles.hpp"

using namespace mppfv;

namespace {

Face unit_face(double distance = 1.0) {
  Face f;
  f.normal = {1.0, 0.0};
  f.distance = distance;
  f.left = 0;
  f.right = 1;
  return f;
}

ProblemSpec linear_spec(double eps) { return linear_advdiff_1d(eps); }

}  // namespace

TEST(LowOrderFlux, Consistency) {
  const ProblemSpec s = burgers_1d();
  EXPECT_DOUBLE_EQ(low_order_convective_flux(1.3, 1.3, unit_face(), s, 2.0), 0.5 * 1.3 * 1.3);
}

TEST(LowOrderFlux, UpwindForLinearAdvection) {
  EXPECT_DOUBLE_EQ(low_order_convective_flux(2.0, 0.0, unit_face(), linear_spec(0.0), 1.0), 2.0);
}

TEST(LowOrderFlux, BurgersExample) {
  EXPECT_DOUBLE_EQ(low_order_convective_flux(0.0, 2.0, unit_face(), burgers_1d(), 2.0), -1.0);
}

TEST(LowOrderFlux, Diffusive) {
  EXPECT_DOUBLE_EQ(low_order_diffusive_flux(0.4, 0.4, unit_face(0.1), linear_spec(0.001)), 0.0);
  EXPECT_NEAR(low_order_diffusive_flux(0.0, 1.0, unit_face(0.1), linear_spec(0.001)), 0.01,
              1e-15);
  // c(u) = 0.01 * 4u(1-u) evaluated at the mean 0.5.
  EXPECT_NEAR(low_order_diffusive_flux(0.0, 1.0, unit_face(0.05), buckley_leverett_1d()),
              0.01 / 0.05, 1e-14);
}

class OperatorTest : public ::testing::Test {
 protected:
  ProblemSpec spec = linear_advdiff_1d(0.0);
  StructuredGrid grid = make_grid(spec, 16);
};

TEST_F(OperatorTest, BarStatesOfEqualStates) {
  const SpatialOperator op(spec, grid);
  const CellField u(grid, 0.42);
  const auto ext = op.extend(u);
  const auto lam = op.wave_speeds(ext, 0.0);
  const BarStateSet b = op.bar_states(ext, lam, 0.0);
  for (std::size_t k = 0; k < op.face_count(); ++k) {
    EXPECT_DOUBLE_EQ(b.advective[k], 0.42);
    EXPECT_DOUBLE_EQ(b.diffusive[k], 0.42);
    EXPECT_DOUBLE_EQ(b.blended[k], 0.42);
    EXPECT_DOUBLE_EQ(b.lambda[k], b.lambda_a[k]);  // c = 0
  }
}

TEST_F(OperatorTest, AdvectiveBarStateIsUpwindValue) {
  const SpatialOperator op(spec, grid);
  CellField u(grid, 0.0);
  u[5] = 1.0;  // face 6 sees (u_i, u_j) = (1, 0); face 5 sees (0, 1)
  const auto ext = op.extend(u);
  const auto lam = op.wave_speeds(ext, 0.0);
  const BarStateSet b = op.bar_states(ext, lam, 0.0);
  EXPECT_NEAR(b.advective[5], 0.0, 1e-15);
  EXPECT_NEAR(b.advective[6], 1.0, 1e-15);
}

TEST_F(OperatorTest, HighOrderFluxOfConstantField) {
  const ProblemSpec s = linear_advdiff_1d(0.01);
  const SpatialOperator op(s, grid);
  const CellField u(grid, 0.3);
  const FaceFluxSet g = op.high_order_fluxes(op.extend(u), 0.0);
  for (double v : g) EXPECT_NEAR(v, 0.3, 1e-15);
}

TEST(HighOrderFlux, FifthOrderOnSmoothLinearAdvection) {
  // sin^4 has critical points, where only a regularisation well above the
  // smoothness indicators keeps the full order.
  const ProblemSpec s = linear_advdiff_1d(0.0);
  auto error = [&](int n) {
    const StructuredGrid g = make_grid(s, n);
    const SpatialOperator op(s, g, WenoOptions{1e-6});
    const CellField u = initial_field(s, g);
    const FaceFluxSet f = op.high_order_fluxes(op.extend(u), 0.0);
    double e = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k)
      e = std::max(e, std::abs(f[k] - s.exact_solution(g.faces()[k].midpoint, 0.0)));
    return e;
  };
  EXPECT_GT(std::log2(error(80) / error(160)), 4.5);
}

TEST(HighOrderFlux, BurgersWaveSpeedUsesReconstruction) {
  const ProblemSpec s = burgers_1d();
  const StructuredGrid g = make_grid(s, 40);
  const SpatialOperator op(s, g);
  const CellField u = initial_field(s, g);
  std::vector<double> lam;
  op.high_order_fluxes(op.extend(u), 0.0, &lam);
  const auto ext = op.extend(u);
  const auto lam_wave = op.wave_speeds(ext, 0.0);
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const Face& f = g.faces()[k];
    const double pl = weno5_face_value(op.stencil(ext, f, false), Side::Right);
    const double pr = weno5_face_value(op.stencil(ext, f, true), Side::Left);
    const double expected = std::max({std::abs(u[f.left]), std::abs(u[f.right]), std::abs(pl),
                                      std::abs(pr), kWaveSpeedFloor});
    EXPECT_DOUBLE_EQ(lam[k], expected);
    EXPECT_DOUBLE_EQ(lam_wave[k], expected);
  }
}

TEST(LowOrderRhs, ConstantFieldIsSteady) {
  const ProblemSpec s = burgers_1d();
  const StructuredGrid g = make_grid(s, 12);
  const SpatialOperator op(s, g);
  const CellField rhs = op.low_order_rhs(CellField(g, 1.1), 0.0);
  for (double v : rhs.values()) EXPECT_NEAR(v, 0.0, 1e-13);
}

TEST(LowOrderRhs, LocalMaximumDoesNotGrow) {
  const ProblemSpec s = burgers_1d();
  const StructuredGrid g = make_grid(s, 12);
  const SpatialOperator op(s, g);
  CellField u = mppfv::testing::random_field(g, 0.0, 1.0, 17);
  u[6] = 1.9;
  EXPECT_LE(op.low_order_rhs(u, 0.0)[6], 0.0);
}

TEST(LowOrderRhs, BarFormMatchesFluxForm) {
  for (const ProblemSpec& s : {burgers_1d(), steady_gaussian_1d(), buckley_leverett_1d()}) {
    const StructuredGrid g = make_grid(s, 8);
    const SpatialOperator op(s, g);
    const CellField u = mppfv::testing::random_field(g, 0.0, 1.0, 23);
    const auto ext = op.extend(u);
    const auto lam = op.wave_speeds(ext, 0.0);
    const CellField div = op.divergence(op.low_order_fluxes(ext, lam, 0.0));
    const CellField rhs = op.low_order_rhs(u, 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(rhs[i], -div[i], 1e-12) << s.name;
  }
}

TEST(LowOrderRhs, BarFormMatchesFluxFormInTwoDimensions) {
  for (const ProblemSpec& s : {solid_rotation_2d(), swirling_vortex_2d(), kpp_2d(0.01)}) {
    const StructuredGrid g = make_grid(s, 8);
    const SpatialOperator op(s, g);
    const CellField u = mppfv::testing::random_field(g, s.u_min, s.u_max, 29);
    const auto ext = op.extend(u);
    const auto lam = op.wave_speeds(ext, 0.3);
    const CellField div = op.divergence(op.low_order_fluxes(ext, lam, 0.3));
    const CellField rhs = op.low_order_rhs(u, 0.3);
    for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(rhs[i], -div[i], 1e-11) << s.name;
  }
}

TEST(BarStates, RandomStatesStayBetweenNeighbours) {
  std::mt19937_64 rng(31);
  const std::vector<ProblemSpec> specs{burgers_1d(), buckley_leverett_1d(), linear_advdiff_1d(0.001),
                                       steady_gaussian_1d(), kpp_2d(0.01), swirling_vortex_2d()};
  for (const ProblemSpec& s : specs) {
    const StructuredGrid g = make_grid(s, 6);
    const SpatialOperator op(s, g);
    for (int trial = 0; trial < 200; ++trial) {
      const CellField u = mppfv::testing::random_field(
          g, s.u_min, std::isfinite(s.u_max) ? s.u_max : 3.0, rng());
      const auto ext = op.extend(u);
      const double t = std::uniform_real_distribution<double>(0.0, s.final_time)(rng);
      const auto lam = op.wave_speeds(ext, t);
      const BarStateSet b = op.bar_states(ext, lam, t);
      const auto v = ext.values();
      for (std::size_t k = 0; k < op.face_count(); ++k) {
        const Face& f = g.faces()[k];
        const double lo = std::min(v[f.left_ext], v[f.right_ext]);
        const double hi = std::max(v[f.left_ext], v[f.right_ext]);
        const double tol = 1e-12 * std::max(1.0, std::abs(hi));
        EXPECT_GE(b.blended[k], lo - tol) << s.name;
        EXPECT_LE(b.blended[k], hi + tol) << s.name;
      }
    }
  }
}

TEST(Divergence, ConservesMassOnPeriodicGrids) {
  const ProblemSpec s = kpp_2d(0.0);
  const StructuredGrid g = make_grid(s, 10);
  const SpatialOperator op(s, g);
  const CellField u = mppfv::testing::random_field(g, s.u_min, s.u_max, 37);
  const CellField div = op.divergence(op.high_order_fluxes(op.extend(u), 0.0));
  double total = 0.0;
  for (double v : div.values()) total += v;
  EXPECT_NEAR(total * g.volume(), 0.0, 1e-11);
  EXPECT_DOUBLE_EQ(op.boundary_outflow(op.high_order_fluxes(op.extend(u), 0.0)), 0.0);
}

TEST(Divergence, DirichletOutflowBalancesMass) {
  const ProblemSpec s = buckley_leverett_1d();
  const StructuredGrid g = make_grid(s, 10);
  const SpatialOperator op(s, g);
  const CellField u = mppfv::testing::random_field(g, 0.0, 1.0, 41);
  const FaceFluxSet flux = op.high_order_fluxes(op.extend(u), 0.0);
  const CellField div = op.divergence(flux);
  double total = 0.0;
  for (double v : div.values()) total += v * g.volume();
  EXPECT_NEAR(total, op.boundary_outflow(flux), 1e-13);
}
