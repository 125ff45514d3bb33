#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "mppfv/time_integration.hpp"
#include "mppfv/metrics.hpp"
#include "support/oracles.hpp"
#include "support/order_conditions.hpp"

using namespace mppfv;

namespace {

// Stability function R(z) = 1 + z b^T (I - zA)^-1 e of a tableau.
double rk_amplification(const ButcherTableau& t, double z) {
  const int m = t.stages();
  Eigen::MatrixXd a(m, m);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    b(i) = t.b[i];
    for (int j = 0; j < m; ++j) a(i, j) = t.a[i][j];
  }
  const Eigen::VectorXd k =
      (Eigen::MatrixXd::Identity(m, m) - z * a).partialPivLu().solve(Eigen::VectorXd::Ones(m));
  return 1.0 + z * b.dot(k);
}

// The T-table applied to exact backward Euler substeps of u' = lambda u.
double extrapolated_amplification(int p, double z) {
  std::vector<double> column;
  for (int k = 1; k <= p; ++k) column.push_back(std::pow(1.0 / (1.0 - z / k), k));
  extrapolate_t_table(column, [](double& dst, double a, double b, double s) {
    dst = a + s * (a - b);
  });
  return column.back();
}

}  // namespace

TEST(Sdirk5, CoefficientsAndOrderConditions) {
  const ButcherTableau t = sdirk5_tableau();
  EXPECT_EQ(t.stages(), 5);
  EXPECT_EQ(t.order, 5);
  EXPECT_NEAR(t.a[0][0], 4024571134387.0 / 14474071345096.0, 1e-16);
  EXPECT_NEAR(t.a[0][0], 0.2780538411, 1e-10);
  double sum = 0.0;
  for (double b : t.b) sum += b;
  EXPECT_NEAR(sum, 1.0, 1e-12);
  EXPECT_NO_THROW(t.validate());
  for (int s = 0; s < 5; ++s) EXPECT_DOUBLE_EQ(t.a[s][s], t.a[0][0]);
  const auto conditions = mppfv::testing::order_conditions(t.a, t.b, 5);
  EXPECT_EQ(conditions.size(), 17u);
  for (const auto& c : conditions) EXPECT_LE(c.residual(), 1e-10) << c.tree.str();
}

TEST(RootedTrees, CountsPerOrder) {
  const auto trees = mppfv::testing::rooted_trees(6);
  int counts[7] = {};
  for (const auto& t : trees) ++counts[t.order()];
  EXPECT_EQ(counts[1], 1);
  EXPECT_EQ(counts[2], 1);
  EXPECT_EQ(counts[3], 2);
  EXPECT_EQ(counts[4], 4);
  EXPECT_EQ(counts[5], 9);
  EXPECT_EQ(counts[6], 20);
}

TEST(RootedTrees, BackwardEulerIsOnlyFirstOrder) {
  const ButcherTableau t = backward_euler_tableau();
  const auto c = mppfv::testing::order_conditions(t.a, t.b, 2);
  EXPECT_LE(c[0].residual(), 1e-15);
  EXPECT_GT(c[1].residual(), 0.1);
}

TEST(IexTableau, FourthOrderCoefficients) {
  const ButcherTableau t = iex_tableau(4);
  ASSERT_EQ(t.stages(), 10);
  const std::vector<double> b{-1.0 / 6, 2, 2, -4.5, -4.5, -4.5, 8.0 / 3, 8.0 / 3, 8.0 / 3, 8.0 / 3};
  const std::vector<double> c{1, 0.5, 1, 1.0 / 3, 2.0 / 3, 1, 0.25, 0.5, 0.75, 1};
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(t.b[i], b[i], 1e-14);
    EXPECT_NEAR(t.c[i], c[i], 1e-14);
  }
  EXPECT_DOUBLE_EQ(t.a[2][1], 0.5);
  EXPECT_DOUBLE_EQ(t.a[2][2], 0.5);
  EXPECT_DOUBLE_EQ(t.a[2][0], 0.0);
  EXPECT_DOUBLE_EQ(t.a[9][6], 0.25);
  EXPECT_DOUBLE_EQ(t.a[5][3], 1.0 / 3);
  EXPECT_NO_THROW(t.validate());
  for (const auto& oc : mppfv::testing::order_conditions(t.a, t.b, 4))
    EXPECT_LE(oc.residual(), 1e-12) << oc.tree.str();
}

TEST(IexTableau, LowOrdersAndWeights) {
  const ButcherTableau one = iex_tableau(1);
  ASSERT_EQ(one.stages(), 1);
  EXPECT_DOUBLE_EQ(one.a[0][0], 1.0);
  EXPECT_DOUBLE_EQ(one.b[0], 1.0);
  const ButcherTableau two = iex_tableau(2);
  ASSERT_EQ(two.stages(), 3);
  EXPECT_NEAR(two.b[0], -1.0, 1e-14);
  EXPECT_NEAR(two.b[1], 1.0, 1e-14);
  EXPECT_NEAR(two.b[2], 1.0, 1e-14);
  for (int p = 1; p <= 9; ++p) {
    const auto w = extrapolation_weights(p);
    double s = 0.0;
    for (double x : w) s += x;
    EXPECT_NEAR(s, 1.0, 1e-9) << p;
  }
  EXPECT_THROW(iex_tableau(0), std::invalid_argument);
  EXPECT_THROW(tableau_by_name("rk4"), std::invalid_argument);
  EXPECT_EQ(tableau_by_name("iex3").stages(), 6);
}

TEST(IexTableau, TTableAgreesWithRungeKuttaForm) {
  for (int p = 1; p <= 6; ++p)
    for (double z : {-0.1, -1.0, -7.5, -40.0, 0.3})
      EXPECT_NEAR(extrapolated_amplification(p, z), rk_amplification(iex_tableau(p), z), 1e-13)
          << "p=" << p << " z=" << z;
}

TEST(SspStages, KnownVerdicts) {
  for (double mu : {0.1, 1.0, 1e3, 1e6}) EXPECT_TRUE(check_ssp_stages(backward_euler_tableau(), mu));
  for (double mu : {1.0, 1e3, 1e6}) EXPECT_TRUE(check_ssp_stages(iex_tableau(4), mu));
  EXPECT_FALSE(check_ssp_stages(sdirk5_tableau(), 1e3));
}

class DirkTest : public ::testing::Test {
 protected:
  ProblemSpec spec = burgers_1d();
  StructuredGrid grid = make_grid(spec, 50);
  SpatialOperator op{spec, grid};
  ImplicitSolver solver{op, {}};
};

TEST_F(DirkTest, ConstantFieldIsPreserved) {
  const CellField u(grid, 0.9);
  const StepResult r = dirk_step(solver, sdirk5_tableau(), u, 0.0, 0.02);
  for (const auto& y : r.stages.values)
    for (double v : y.values()) EXPECT_NEAR(v, 0.9, 1e-13);
  for (double v : r.u.values()) EXPECT_NEAR(v, 0.9, 1e-13);
}

TEST_F(DirkTest, StepConservesMass) {
  const CellField u = initial_field(spec, grid);
  const StepResult r = dirk_step(solver, sdirk5_tableau(), u, 0.0, 0.02);
  EXPECT_NEAR(total_mass(r.u), total_mass(u), 1e-10 * total_mass(u));
  EXPECT_EQ(r.stages.values.size(), 5u);
  EXPECT_EQ(r.reports.size(), 5u);
}

TEST_F(DirkTest, IexOrderOneIsBackwardEuler) {
  const CellField u = initial_field(spec, grid);
  const IexResult a = iex_step(solver, 1, u, 0.0, 0.02);
  const StepResult b = dirk_step(solver, backward_euler_tableau(), u, 0.0, 0.02);
  // T_11 is the substep value itself; it matches the conservative update only
  // up to the stage tolerance.
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_NEAR(a.u[i], b.u[i], 1e-13);
    EXPECT_NEAR(a.extrapolated[i], b.u[i], 1e-7);
  }
}

TEST(IexStep, TTableAndTableauAgreeOnLinearProblem) {
  // Linear weights make the spatial operator linear, so both paths solve the
  // same linear stage systems.
  const ProblemSpec spec = linear_advdiff_1d(0.001);
  const StructuredGrid grid = make_grid(spec, 32);
  const SpatialOperator op(spec, grid, WenoOptions{1e-6, 2, true});
  ImplicitSolver::Options opt;
  opt.stage_tolerance = 1e-15;
  opt.stage_max_iterations = 400;
  const ImplicitSolver solver(op, opt);
  const CellField u = initial_field(spec, grid);
  const double dt = 0.5 * grid.spacing(0);
  const IexResult a = iex_step(solver, 4, u, 0.0, dt);
  const StepResult b = dirk_step(solver, iex_tableau(4), u, 0.0, dt);
  for (std::size_t i = 0; i < u.size(); ++i) {
    EXPECT_NEAR(a.extrapolated[i], b.u[i], 1e-13);
    EXPECT_NEAR(a.u[i], b.u[i], 1e-13);
  }
  EXPECT_EQ(a.substeps.size(), 10u);
}
