#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "mppfv/fluxes.hpp"
#include "mppfv/solvers.hpp"
#include "mppfv/time_integration.hpp"

namespace mppfv {

/// Per-cell allowances for the net limited correction, Q- <= 0 <= Q+.
struct BoundBudget {
  std::vector<double> q_minus;
  std::vector<double> q_plus;
};

/// Zalesak's limiter on the face corrections `dg` (oriented left to right;
/// the left cell receives +|S| dg, the right cell -|S| dg). Cells marked
/// Face::kGhost impose no constraint. Throws std::invalid_argument when a
/// budget has the wrong sign.
std::vector<double> zalesak_alphas(const std::vector<Face>& faces, std::size_t cells,
                                   std::span<const double> dg, const BoundBudget& budget);

/// Net |S|-weighted correction sum_j |S_ij| alpha_ij dg_ij per cell.
std::vector<double> limited_correction_sums(const std::vector<Face>& faces, std::size_t cells,
                                            std::span<const double> dg,
                                            std::span<const double> alpha);

/// Q+- = |K|/dt (u^max/min - u_ref). States outside the bounds by more than
/// roundoff throw std::domain_error; roundoff-level excursions clamp to zero.
BoundBudget fct_budgets(const SpatialOperator& op, const CellField& u_ref, double dt);

/// Q+- = a [(u^max/min - ubar) + gamma (u^max/min - u)].
BoundBudget gmc_budgets(const ProblemSpec& spec, std::span<const double> a,
                        std::span<const double> ubar, std::span<const double> u, double gamma);

struct LimitedStep {
  CellField u;
  FaceFluxSet flux;            // net flux that maps u^n to u
  std::vector<double> alpha;   // last set of limiter coefficients
  SolverReport report;
};

/// u = u^L + (dt/|K|) sum |S| alpha (G^L - G^H); with iterations > 1 the
/// rejected part (1 - alpha)(G^L - G^H) is limited again against the updated state.
LimitedStep fct_step(const SpatialOperator& op, const CellField& u_low, const FaceFluxSet& g_low,
                     const FaceFluxSet& g_high, double dt, int iterations = 1);

struct GmcOptions {
  double gamma = 0.0;
  double tolerance = 1e-12;
  int max_sweeps = 5000;
};

/// Fixed-point solve of the implicit GMC scheme with the high-order flux frozen.
/// Throws SolverError when the sweep budget runs out.
LimitedStep gmc_step(const SpatialOperator& op, const CellField& un, const FaceFluxSet& g_high,
                     double dt, double t_new, const GmcOptions& options);

/// Limited semi-discrete right-hand side -(1/|K|) sum |S| [G^L - alpha (G^L - G^H)]
/// with the GMC budgets taken at `u`. `flux_out` receives the limited flux.
CellField semidiscrete_gmc_rhs(const SpatialOperator& op, const CellField& u, double t,
                               double gamma, FaceFluxSet* flux_out = nullptr);

/// Backward Euler step of the semi-discrete GMC scheme, solved by the
/// bound-preserving fixed point. Every iterate stays within the global bounds.
Substep gmc_implicit_euler_substep(const SpatialOperator& op, const CellField& u_prev, double h,
                                   double t_new, const GmcOptions& options);

enum class LimiterKind { None, Fct, Gmc };
LimiterKind limiter_from_name(std::string_view name);

struct LimiterConfig {
  LimiterKind kind = LimiterKind::None;
  int fct_iterations = 1;
  GmcOptions gmc{};
};

/// Limits a high-order step u^n -> u^n - dt div(G^H) landing at t_new. FCT
/// first solves the low-order backward Euler system.
LimitedStep limit_step(const ImplicitSolver& solver, const CellField& un,
                       const FaceFluxSet& g_high, double t_new, double dt,
                       const LimiterConfig& config);

/// DIRK step with every stage limited as a step of length c_m dt from u^n
/// driven by the stage-average flux sum_s a_ms G_s / c_m; the stage flux is
/// then re-evaluated at the limited stage value. The final combination is
/// limited as usual.
StepResult stage_limited_dirk_step(const ImplicitSolver& solver, const ButcherTableau& tableau,
                                   const CellField& un, double t, double dt,
                                   const LimiterConfig& config);

}  // namespace mppfv
