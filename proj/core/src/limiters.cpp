#include "mppfv/limiters.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mppfv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// States may leave the bounds by roundoff; anything larger is a broken precondition.
double bound_slack(double bound) { return 1e-9 * std::max(1.0, std::abs(bound)); }

double clamp_budget(double q, double gap, double bound, bool upper) {
  if (upper ? q >= 0.0 : q <= 0.0) return q;
  if (std::abs(gap) <= bound_slack(bound)) return 0.0;
  throw std::domain_error(std::string("reference state violates the ") +
                          (upper ? "upper" : "lower") + " bound by " + std::to_string(gap));
}

// Limited updates land on a bound up to a few roundoff errors; pull those
// values onto the bound. The mass change is of the same roundoff size.
void snap_to_bounds(CellField& u, const ProblemSpec& spec) {
  const double range = std::isfinite(spec.u_max - spec.u_min) ? spec.u_max - spec.u_min : 1.0;
  const double tol = 1e-14 * std::max(1.0, range);
  for (double& v : u.values()) {
    if (v < spec.u_min && v > spec.u_min - tol) v = spec.u_min;
    if (v > spec.u_max && v < spec.u_max + tol) v = spec.u_max;
  }
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Everything GMC needs at one state: lambda sums, cell bar states, low-order fluxes.
struct GmcState {
  std::vector<double> a;
  std::vector<double> ubar;
  FaceFluxSet g_low;
};

GmcState gmc_state(const SpatialOperator& op, const CellField& u, double t) {
  const ExtendedField ext = op.extend(u);
  const auto lam = op.wave_speeds(ext, t);
  const BarStateSet bars = op.bar_states(ext, lam, t);
  GmcState s;
  s.a = op.cell_lambda_sums(bars);
  s.g_low = op.low_order_fluxes(ext, lam, t);
  // a_i (ubar_i - u_i) = -sum_j |S_ij| G^L_ij, which is the bar-state average
  // sum_j |S_ij| lambda_ij u_ij / a_i whenever sum_j |S_ij| n_ij . f(u_i) = 0.
  std::vector<double> out(u.size(), 0.0);
  op.accumulate_divergence(s.g_low, op.grid().volume(), out);
  s.ubar.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) s.ubar[i] = u[i] - out[i] / s.a[i];
  return s;
}

// Limited update pieces at one state for a frozen or fresh high-order flux.
struct GmcSweep {
  std::vector<double> alpha;
  std::vector<double> ustar;
  FaceFluxSet limited;
};

GmcSweep gmc_sweep(const SpatialOperator& op, const CellField& u, const GmcState& s,
                   const FaceFluxSet& g_high, double gamma) {
  const auto& faces = op.faces();
  const std::size_t n = u.size();
  std::vector<double> dg(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) dg[k] = s.g_low[k] - g_high[k];
  const BoundBudget q = gmc_budgets(op.problem(), s.a, s.ubar, u.values(), gamma);
  GmcSweep w;
  w.alpha = zalesak_alphas(faces, n, dg, q);
  const auto corr = limited_correction_sums(faces, n, dg, w.alpha);
  w.ustar.resize(n);
  for (std::size_t i = 0; i < n; ++i) w.ustar[i] = s.ubar[i] + corr[i] / s.a[i];
  w.limited.resize(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) w.limited[k] = s.g_low[k] - w.alpha[k] * dg[k];
  return w;
}

}  // namespace

std::vector<double> zalesak_alphas(const std::vector<Face>& faces, std::size_t cells,
                                   std::span<const double> dg, const BoundBudget& budget) {
  if (dg.size() != faces.size()) throw std::invalid_argument("zalesak_alphas: size mismatch");
  if (budget.q_minus.size() != cells || budget.q_plus.size() != cells)
    throw std::invalid_argument("zalesak_alphas: budget size mismatch");
  for (std::size_t i = 0; i < cells; ++i)
    if (budget.q_minus[i] > 0.0 || budget.q_plus[i] < 0.0 || std::isnan(budget.q_minus[i]) ||
        std::isnan(budget.q_plus[i]))
      throw std::invalid_argument("zalesak_alphas: budget of cell " + std::to_string(i) +
                                  " has the wrong sign");

  std::vector<double> p_plus(cells, 0.0), p_minus(cells, 0.0);
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const Face& f = faces[k];
    const double w = f.area * dg[k];
    if (f.left != Face::kGhost) (w > 0.0 ? p_plus : p_minus)[f.left] += w;
    if (f.right != Face::kGhost) (w > 0.0 ? p_minus : p_plus)[f.right] -= w;
  }

  std::vector<double> r_plus(cells, 1.0), r_minus(cells, 1.0);
  for (std::size_t i = 0; i < cells; ++i) {
    if (p_plus[i] > 0.0) r_plus[i] = std::min(1.0, budget.q_plus[i] / p_plus[i]);
    if (p_minus[i] < 0.0) r_minus[i] = std::min(1.0, budget.q_minus[i] / p_minus[i]);
  }

  std::vector<double> alpha(faces.size(), 1.0);
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const Face& f = faces[k];
    const bool positive = dg[k] >= 0.0;
    const double rl = f.left == Face::kGhost ? 1.0 : (positive ? r_plus : r_minus)[f.left];
    const double rr = f.right == Face::kGhost ? 1.0 : (positive ? r_minus : r_plus)[f.right];
    alpha[k] = std::min(rl, rr);
  }
  return alpha;
}

std::vector<double> limited_correction_sums(const std::vector<Face>& faces, std::size_t cells,
                                            std::span<const double> dg,
                                            std::span<const double> alpha) {
  std::vector<double> sum(cells, 0.0);
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const Face& f = faces[k];
    const double w = f.area * alpha[k] * dg[k];
    if (f.left != Face::kGhost) sum[f.left] += w;
    if (f.right != Face::kGhost) sum[f.right] -= w;
  }
  return sum;
}

BoundBudget fct_budgets(const SpatialOperator& op, const CellField& u_ref, double dt) {
  const ProblemSpec& spec = op.problem();
  const double scale = op.grid().volume() / dt;
  BoundBudget b;
  b.q_minus.resize(u_ref.size());
  b.q_plus.resize(u_ref.size());
  for (std::size_t i = 0; i < u_ref.size(); ++i) {
    const double up = spec.u_max - u_ref[i];
    const double lo = spec.u_min - u_ref[i];
    b.q_plus[i] = std::isinf(spec.u_max) ? kInf : clamp_budget(scale * up, up, spec.u_max, true);
    b.q_minus[i] =
        std::isinf(spec.u_min) ? -kInf : clamp_budget(scale * lo, lo, spec.u_min, false);
  }
  return b;
}

BoundBudget gmc_budgets(const ProblemSpec& spec, std::span<const double> a,
                        std::span<const double> ubar, std::span<const double> u, double gamma) {
  BoundBudget b;
  b.q_minus.resize(u.size());
  b.q_plus.resize(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::isinf(spec.u_max)) {
      b.q_plus[i] = kInf;
    } else {
      const double gap = std::min(spec.u_max - ubar[i], spec.u_max - u[i]);
      const double q = a[i] * ((spec.u_max - ubar[i]) + gamma * (spec.u_max - u[i]));
      b.q_plus[i] = clamp_budget(q, gap, spec.u_max, true);
    }
    if (std::isinf(spec.u_min)) {
      b.q_minus[i] = -kInf;
    } else {
      const double gap = std::max(spec.u_min - ubar[i], spec.u_min - u[i]);
      const double q = a[i] * ((spec.u_min - ubar[i]) + gamma * (spec.u_min - u[i]));
      b.q_minus[i] = clamp_budget(q, gap, spec.u_min, false);
    }
  }
  return b;
}

LimitedStep fct_step(const SpatialOperator& op, const CellField& u_low, const FaceFluxSet& g_low,
                     const FaceFluxSet& g_high, double dt, int iterations) {
  if (iterations < 1) throw std::invalid_argument("fct_step: at least one iteration required");
  const auto& faces = op.faces();
  const std::size_t n = u_low.size();
  const double scale = dt / op.grid().volume();

  LimitedStep out{u_low, g_low, {}, {}};
  std::vector<double> remaining(faces.size());
  for (std::size_t k = 0; k < faces.size(); ++k) remaining[k] = g_low[k] - g_high[k];

  for (int it = 0; it < iterations; ++it) {
    const BoundBudget q = fct_budgets(op, out.u, dt);
    const auto alpha = zalesak_alphas(faces, n, remaining, q);
    const auto corr = limited_correction_sums(faces, n, remaining, alpha);
    for (std::size_t i = 0; i < n; ++i) out.u[i] += scale * corr[i];
    for (std::size_t k = 0; k < faces.size(); ++k) {
      out.flux[k] -= alpha[k] * remaining[k];
      remaining[k] *= 1.0 - alpha[k];
    }
    if (it == 0) out.alpha = alpha;
    out.report.iterations = it + 1;
  }
  snap_to_bounds(out.u, op.problem());
  out.report.converged = true;
  return out;
}

LimitedStep gmc_step(const SpatialOperator& op, const CellField& un, const FaceFluxSet& g_high,
                     double dt, double t_new, const GmcOptions& options) {
  if (!(dt > 0.0)) throw std::invalid_argument("gmc_step: dt must be positive");
  if (options.gamma < 0.0) throw std::invalid_argument("gmc_step: gamma must be nonnegative");
  const double kappa = dt / op.grid().volume();
  const double g1 = 1.0 + options.gamma;
  CellField u = un;
  std::vector<double> r(u.size());
  SolverReport report;
  for (int sweep = 0;; ++sweep) {
    const GmcState s = gmc_state(op, u, t_new);
    GmcSweep w = gmc_sweep(op, u, s, g_high, options.gamma);
    for (std::size_t i = 0; i < u.size(); ++i)
      r[i] = u[i] - un[i] - kappa * s.a[i] * (w.ustar[i] - u[i]);
    report.iterations = sweep;
    report.residual = norm2(r);
    if (report.residual <= options.tolerance) {
      report.converged = true;
      snap_to_bounds(u, op.problem());
      return {std::move(u), std::move(w.limited), std::move(w.alpha), report};
    }
    if (sweep >= options.max_sweeps || !std::isfinite(report.residual))
      throw SolverError("GMC fixed point did not converge", report);
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double m = kappa * s.a[i] * g1;
      const double g = u[i] + (w.ustar[i] - u[i]) / g1;
      u[i] = (un[i] + m * g) / (1.0 + m);
    }
  }
}

CellField semidiscrete_gmc_rhs(const SpatialOperator& op, const CellField& u, double t,
                               double gamma, FaceFluxSet* flux_out) {
  const GmcState s = gmc_state(op, u, t);
  const FaceFluxSet g_high = op.high_order_fluxes(op.extend(u), t);
  GmcSweep w = gmc_sweep(op, u, s, g_high, gamma);
  CellField rhs(op.grid());
  op.accumulate_divergence(w.limited, -1.0, rhs.values());
  if (flux_out) *flux_out = std::move(w.limited);
  return rhs;
}

Substep gmc_implicit_euler_substep(const SpatialOperator& op, const CellField& u_prev, double h,
                                   double t_new, const GmcOptions& options) {
  const double kappa = h / op.grid().volume();
  const double g1 = 1.0 + options.gamma;
  CellField y = u_prev;
  std::vector<double> r(y.size());
  SolverReport report;
  for (int sweep = 0;; ++sweep) {
    const GmcState s = gmc_state(op, y, t_new);
    const FaceFluxSet g_high = op.high_order_fluxes(op.extend(y), t_new);
    GmcSweep w = gmc_sweep(op, y, s, g_high, options.gamma);
    for (std::size_t i = 0; i < y.size(); ++i)
      r[i] = y[i] - u_prev[i] - kappa * s.a[i] * (w.ustar[i] - y[i]);
    report.iterations = sweep;
    report.residual = norm2(r);
    if (report.residual <= options.tolerance) {
      report.converged = true;
      return {std::move(y), std::move(w.limited), report};
    }
    if (sweep >= options.max_sweeps || !std::isfinite(report.residual))
      throw SolverError("semi-discrete GMC substep did not converge", report);
    for (std::size_t i = 0; i < y.size(); ++i) {
      const double m = kappa * s.a[i] * g1;
      const double g = y[i] + (w.ustar[i] - y[i]) / g1;
      y[i] = (u_prev[i] + m * g) / (1.0 + m);
    }
  }
}

LimiterKind limiter_from_name(std::string_view name) {
  if (name == "none") return LimiterKind::None;
  if (name == "fct") return LimiterKind::Fct;
  if (name == "gmc") return LimiterKind::Gmc;
  throw std::invalid_argument("unknown limiter '" + std::string(name) + "'");
}

LimitedStep limit_step(const ImplicitSolver& solver, const CellField& un,
                       const FaceFluxSet& g_high, double t_new, double dt,
                       const LimiterConfig& config) {
  const SpatialOperator& op = solver.op();
  switch (config.kind) {
    case LimiterKind::None: {
      LimitedStep out{un, g_high, std::vector<double>(g_high.size(), 1.0), {0, 0.0, true}};
      op.accumulate_divergence(g_high, -dt, out.u.values());
      return out;
    }
    case LimiterKind::Fct: {
      const LowOrderSolution low = solver.newton_low_order(un, dt, t_new);
      LimitedStep out = fct_step(op, low.u, low.fluxes, g_high, dt, config.fct_iterations);
      out.report = low.report;
      return out;
    }
    case LimiterKind::Gmc:
      return gmc_step(op, un, g_high, dt, t_new, config.gmc);
  }
  throw std::logic_error("limit_step: unhandled limiter");
}

StepResult stage_limited_dirk_step(const ImplicitSolver& solver, const ButcherTableau& tableau,
                                   const CellField& un, double t, double dt,
                                   const LimiterConfig& config) {
  const SpatialOperator& op = solver.op();
  const int m = tableau.stages();
  StepResult out{un, FaceFluxSet(op.face_count(), 0.0), {}, {}};

  for (int s = 0; s < m; ++s) {
    CellField w = un;
    for (int q = 0; q < s; ++q)
      if (tableau.a[s][q] != 0.0)
        op.accumulate_divergence(out.stages.fluxes[q], -dt * tableau.a[s][q], w.values());
    const double ts = t + tableau.c[s] * dt;
    const CellField& guess = s == 0 ? un : out.stages.values.back();
    StageSolution st = solver.newton_stage(w, guess, tableau.a[s][s] * dt, ts);
    out.reports.push_back(st.report);

    const double cs = tableau.c[s];
    if (config.kind != LimiterKind::None && cs > 0.0) {
      FaceFluxSet avg(op.face_count(), 0.0);
      for (int q = 0; q <= s; ++q) {
        const FaceFluxSet& g = q == s ? st.fluxes : out.stages.fluxes[q];
        for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += tableau.a[s][q] * g[k] / cs;
      }
      LimitedStep lim = limit_step(solver, un, avg, ts, cs * dt, config);
      st.y = std::move(lim.u);
      st.fluxes = op.high_order_fluxes(op.extend(st.y), ts);
    }
    out.stages.values.push_back(std::move(st.y));
    out.stages.fluxes.push_back(std::move(st.fluxes));
  }

  FaceFluxSet g(op.face_count(), 0.0);
  for (int s = 0; s < m; ++s)
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += tableau.b[s] * out.stages.fluxes[s][k];
  LimitedStep fin = limit_step(solver, un, g, t + dt, dt, config);
  out.u = std::move(fin.u);
  out.flux = std::move(fin.flux);
  return out;
}

}  // namespace mppfv
