#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "mppfv/limiters.hpp"
#include "mppfv/metrics.hpp"
#include "support/oracles.hpp"

using namespace mppfv;

namespace {

BoundBudget uniform_budget(std::size_t n, double lo, double hi) {
  return {std::vector<double>(n, lo), std::vector<double>(n, hi)};
}

void expect_within_bounds(const CellField& u, const ProblemSpec& s, double tol) {
  for (double v : u.values()) {
    EXPECT_GE(v, s.u_min - tol);
    EXPECT_LE(v, s.u_max + tol);
  }
}

}  // namespace

TEST(Zalesak, ZeroCorrectionKeepsFullWeight) {
  const StructuredGrid g(5, 0.0, 1.0, BoundaryKind::Periodic);
  const std::vector<double> dg(g.faces().size(), 0.0);
  for (double a : zalesak_alphas(g.faces(), 5, dg, uniform_budget(5, 0.0, 0.0))) EXPECT_EQ(a, 1.0);
}

TEST(Zalesak, ZeroBudgetsBlockEveryCorrection) {
  const StructuredGrid g(6, 0.0, 1.0, BoundaryKind::Periodic);
  const std::vector<double> dg{0.3, -0.2, 1.0, 0.5, -0.7, 0.1};
  for (double a : zalesak_alphas(g.faces(), 6, dg, uniform_budget(6, 0.0, 0.0))) EXPECT_EQ(a, 0.0);
}

TEST(Zalesak, ThreeCellExample) {
  // Face 1 joins cells 0 and 1 and pushes +1 into cell 0, -1 out of cell 1.
  const StructuredGrid g(3, 0.0, 3.0, BoundaryKind::Periodic);
  ASSERT_EQ(g.faces()[1].left, 0);
  ASSERT_EQ(g.faces()[1].right, 1);
  const std::vector<double> dg{0.0, 1.0, 0.0};
  BoundBudget q = uniform_budget(3, -1.0, 1.0);
  q.q_plus[0] = 0.5;
  q.q_minus[1] = -0.25;
  const auto alpha = zalesak_alphas(g.faces(), 3, dg, q);
  EXPECT_DOUBLE_EQ(alpha[1], 0.25);
  EXPECT_EQ(alpha[0], 1.0);
  EXPECT_EQ(alpha[2], 1.0);
  const auto sums = limited_correction_sums(g.faces(), 3, dg, alpha);
  EXPECT_DOUBLE_EQ(sums[0], 0.25);
  EXPECT_DOUBLE_EQ(sums[1], -0.25);
  EXPECT_DOUBLE_EQ(sums[2], 0.0);
}

TEST(Zalesak, RandomInstancesRespectBudgets) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> flux(-2.0, 2.0);
  std::uniform_real_distribution<double> budget(0.0, 1.5);
  const StructuredGrid g1(9, 0.0, 1.0, BoundaryKind::Dirichlet);
  const StructuredGrid g2({4, 3}, {0.0, 0.0}, {1.0, 1.0},
                          {BoundaryKind::Periodic, BoundaryKind::Periodic});
  for (int trial = 0; trial < 10000; ++trial) {
    const StructuredGrid& g = trial % 2 ? g1 : g2;
    const std::size_t n = g.cell_count();
    std::vector<double> dg(g.faces().size());
    for (double& v : dg) v = flux(rng);
    BoundBudget q;
    for (std::size_t i = 0; i < n; ++i) {
      q.q_minus.push_back(trial % 7 == 0 ? 0.0 : -budget(rng));
      q.q_plus.push_back(budget(rng));
    }
    const auto alpha = zalesak_alphas(g.faces(), n, dg, q);
    for (double a : alpha) {
      ASSERT_GE(a, 0.0);
      ASSERT_LE(a, 1.0);
    }
    const auto sums = limited_correction_sums(g.faces(), n, dg, alpha);
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_LE(sums[i], q.q_plus[i] + 1e-13) << trial;
      ASSERT_GE(sums[i], q.q_minus[i] - 1e-13) << trial;
    }
  }
}

TEST(Zalesak, WrongSignThrows) {
  const StructuredGrid g(3, 0.0, 1.0, BoundaryKind::Periodic);
  const std::vector<double> dg{0.1, 0.2, 0.3};
  EXPECT_THROW(zalesak_alphas(g.faces(), 3, dg, uniform_budget(3, 0.1, 1.0)),
               std::invalid_argument);
  EXPECT_THROW(zalesak_alphas(g.faces(), 3, dg, uniform_budget(3, -0.1, -1.0)),
               std::invalid_argument);
}

TEST(Budgets, FctScalesDistanceToBounds) {
  const ProblemSpec s = burgers_1d();
  const StructuredGrid g = make_grid(s, 4);
  const SpatialOperator op(s, g);
  const CellField u(g, std::vector<double>{0.0, 0.5, 2.0, 1.0});
  const double dt = 0.1;
  const BoundBudget q = fct_budgets(op, u, dt);
  const double scale = g.volume() / dt;
  EXPECT_DOUBLE_EQ(q.q_plus[1], scale * 1.5);
  EXPECT_DOUBLE_EQ(q.q_minus[1], -scale * 0.5);
  EXPECT_EQ(q.q_plus[2], 0.0);
  EXPECT_EQ(q.q_minus[0], 0.0);
  const CellField bad(g, std::vector<double>{0.0, 0.5, 2.5, 1.0});
  EXPECT_THROW(fct_budgets(op, bad, dt), std::domain_error);
}

TEST(Budgets, GmcFormula) {
  const ProblemSpec s = burgers_1d();
  const std::vector<double> a{2.0}, ubar{0.5}, u{1.0};
  const BoundBudget q = gmc_budgets(s, a, ubar, u, 1.0);
  EXPECT_DOUBLE_EQ(q.q_plus[0], 2.0 * ((2.0 - 0.5) + (2.0 - 1.0)));
  EXPECT_DOUBLE_EQ(q.q_minus[0], 2.0 * ((0.0 - 0.5) + (0.0 - 1.0)));
}

class LimiterOnBurgers : public ::testing::Test {
 protected:
  ProblemSpec spec = burgers_1d();
  StructuredGrid grid = make_grid(spec, 60);
  SpatialOperator op{spec, grid};
  ImplicitSolver solver{op, {}};
  CellField u0 = initial_field(spec, grid);
  double dt = 0.5 * grid.spacing(0);
};

TEST_F(LimiterOnBurgers, FctWithEqualFluxesReturnsLowOrder) {
  const LowOrderSolution low = solver.newton_low_order(u0, dt, dt);
  const LimitedStep r = fct_step(op, low.u, low.fluxes, low.fluxes, dt, 2);
  for (std::size_t i = 0; i < u0.size(); ++i) EXPECT_EQ(r.u[i], low.u[i]);
  for (std::size_t k = 0; k < r.flux.size(); ++k) EXPECT_EQ(r.flux[k], low.fluxes[k]);
}

TEST_F(LimiterOnBurgers, FctStepStaysInBoundsAndConserves) {
  const LowOrderSolution low = solver.newton_low_order(u0, dt, dt);
  const FaceFluxSet high = op.high_order_fluxes(op.extend(u0), dt);
  for (int iters : {1, 2, 3}) {
    const LimitedStep r = fct_step(op, low.u, low.fluxes, high, dt, iters);
    expect_within_bounds(r.u, spec, 1e-14);
    EXPECT_NEAR(total_mass(r.u), total_mass(u0), 1e-12);
    // The returned flux reproduces the state from u^n.
    CellField check = u0;
    op.accumulate_divergence(r.flux, -dt, check.values());
    for (std::size_t i = 0; i < u0.size(); ++i) EXPECT_NEAR(check[i], r.u[i], 1e-12);
  }
}

TEST_F(LimiterOnBurgers, GmcConstantStateIsFixed) {
  const CellField c(grid, 1.3);
  const FaceFluxSet high = op.high_order_fluxes(op.extend(c), dt);
  const LimitedStep r = gmc_step(op, c, high, dt, dt, {});
  for (double v : r.u.values()) EXPECT_NEAR(v, 1.3, 1e-13);
  EXPECT_EQ(r.report.iterations, 0);
}

TEST_F(LimiterOnBurgers, GmcStepStaysInBoundsForEveryGamma) {
  const FaceFluxSet high = op.high_order_fluxes(op.extend(u0), dt);
  for (double gamma : {0.0, 1.0, 2.0}) {
    const LimitedStep r = gmc_step(op, u0, high, dt, dt, {gamma, 1e-12, 5000});
    EXPECT_TRUE(r.report.converged);
    expect_within_bounds(r.u, spec, 1e-14);
    EXPECT_NEAR(total_mass(r.u), total_mass(u0), 1e-11);
  }
  EXPECT_THROW(gmc_step(op, u0, high, dt, dt, {0.0, 1e-30, 2}), SolverError);
}

TEST_F(LimiterOnBurgers, SemidiscreteAlphasInterpolateBetweenFluxes) {
  FaceFluxSet limited;
  const CellField rhs = semidiscrete_gmc_rhs(op, u0, 0.0, 1.0, &limited);
  const ExtendedField ext = op.extend(u0);
  const auto lam = op.wave_speeds(ext, 0.0);
  const FaceFluxSet low = op.low_order_fluxes(ext, lam, 0.0);
  const FaceFluxSet high = op.high_order_fluxes(ext, 0.0);
  for (std::size_t k = 0; k < limited.size(); ++k) {
    const double lo = std::min(low[k], high[k]);
    const double hi = std::max(low[k], high[k]);
    EXPECT_GE(limited[k], lo - 1e-14);
    EXPECT_LE(limited[k], hi + 1e-14);
  }
  double net = 0.0;
  for (double v : rhs.values()) net += v;
  EXPECT_NEAR(net, 0.0, 1e-10);
}

TEST_F(LimiterOnBurgers, ImplicitEulerSubstepStaysInBounds) {
  const Substep s = gmc_implicit_euler_substep(op, u0, 2.0 * dt, 2.0 * dt, {1.0, 1e-12, 5000});
  EXPECT_TRUE(s.report.converged);
  expect_within_bounds(s.u, spec, 1e-14);
}

TEST_F(LimiterOnBurgers, StageLimitedDirkKeepsStagesInBounds) {
  for (LimiterKind kind : {LimiterKind::Fct, LimiterKind::Gmc}) {
    LimiterConfig cfg;
    cfg.kind = kind;
    const StepResult r = stage_limited_dirk_step(solver, sdirk5_tableau(), u0, 0.0, dt, cfg);
    for (const CellField& y : r.stages.values) expect_within_bounds(y, spec, 1e-12);
    expect_within_bounds(r.u, spec, 1e-14);
    EXPECT_NEAR(total_mass(r.u), total_mass(u0), 1e-11);
  }
}

TEST_F(LimiterOnBurgers, NoLimiterIsThePlainUpdate) {
  const FaceFluxSet high = op.high_order_fluxes(op.extend(u0), dt);
  const LimitedStep r = limit_step(solver, u0, high, dt, dt, {});
  const CellField d = op.divergence(high);
  for (std::size_t i = 0; i < u0.size(); ++i) EXPECT_NEAR(r.u[i], u0[i] - dt * d[i], 1e-15);
}

TEST(LimiterNames, Parse) {
  EXPECT_EQ(limiter_from_name("gmc"), LimiterKind::Gmc);
  EXPECT_EQ(limiter_from_name("fct"), LimiterKind::Fct);
  EXPECT_EQ(limiter_from_name("none"), LimiterKind::None);
  EXPECT_THROW(limiter_from_name("mcl"), std::invalid_argument);
}
