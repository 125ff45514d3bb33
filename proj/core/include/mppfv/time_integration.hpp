#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "mppfv/fluxes.hpp"
#include "mppfv/solvers.hpp"

namespace mppfv {

/// Diagonally implicit Runge-Kutta coefficients.
struct ButcherTableau {
  std::string name;
  int order = 1;
  std::vector<std::vector<double>> a;  // full M x M, strictly upper part zero
  std::vector<double> b;
  std::vector<double> c;

  int stages() const { return static_cast<int>(b.size()); }
  /// Throws std::invalid_argument unless the tableau is square, lower
  /// triangular, has row sums equal to c and weights summing to one.
  void validate(double tol = 1e-12) const;
};

ButcherTableau backward_euler_tableau();
ButcherTableau sdirk5_tableau();
/// Runge-Kutta form of implicit Euler extrapolation of order p: block k holds
/// k backward Euler steps of size 1/k, weighted by the extrapolation weights.
ButcherTableau iex_tableau(int p);
/// "be", "sdirk5" or "iex1".."iex9".
ButcherTableau tableau_by_name(std::string_view name);

/// Weights w_k, k = 1..p, with T_pp = sum_k w_k T_k1.
std::vector<double> extrapolation_weights(int p);

/// True iff A X >= 0 and A X e <= e entrywise for X = (I + mu A)^-1, within `tol`.
bool check_ssp_stages(const ButcherTableau& t, double mu, double tol = 1e-12);

/// Aitken-Neville sweep over the first column T_k1 (k = 1..p, stored at index
/// k - 1). On return column[p - 1] holds T_pp. `axpy(dst, a, b, s)` must set
/// dst = a + s (a - b).
template <typename T, typename Combine>
void extrapolate_t_table(std::vector<T>& column, Combine axpy) {
  const int p = static_cast<int>(column.size());
  for (int k = 2; k <= p; ++k) {
    for (int j = p; j >= k; --j) {
      const double ratio = static_cast<double>(j) / static_cast<double>(j - k + 1);
      axpy(column[j - 1], column[j - 1], column[j - 2], 1.0 / (ratio - 1.0));
    }
  }
}

struct StageSet {
  std::vector<CellField> values;
  std::vector<FaceFluxSet> fluxes;
};

struct StepResult {
  CellField u;        // u^n - dt div(G)
  FaceFluxSet flux;   // aggregated high-order flux G
  StageSet stages;
  std::vector<SolverReport> reports;
};

/// One DIRK step from time t. Stage m solves
/// y_m = u^n - dt sum_{s<m} a_ms div G_s - a_mm dt div G(y_m) at t + c_m dt.
StepResult dirk_step(const ImplicitSolver& solver, const ButcherTableau& tableau,
                     const CellField& un, double t, double dt);

/// Result of one backward Euler substep from `u` with step `h`, landing at time `t_new`.
struct Substep {
  CellField u;
  FaceFluxSet flux;
  SolverReport report;
};
using SubstepSolver =
    std::function<Substep(const CellField& u, double h, double t_new)>;

/// Implicit Euler extrapolation by the T-table. `substep` defaults to a
/// backward Euler step with the high-order flux.
struct IexResult {
  CellField u;              // u^n - dt div(flux), the conservative form
  CellField extrapolated;   // T_pp as produced by the table
  FaceFluxSet flux;         // extrapolated mean substep flux
  std::vector<CellField> substeps;  // every substep value, in order
  std::vector<SolverReport> reports;
};
IexResult iex_step(const ImplicitSolver& solver, int p, const CellField& un, double t, double dt,
                   const SubstepSolver& substep = {});

}  // namespace mppfv
