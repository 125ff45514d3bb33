#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mppfv/fluxes.hpp"
#include "mppfv/mesh.hpp"

namespace mppfv {

struct SolverReport {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// Thrown when an iteration exhausts its budget. Carries the report.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, SolverReport report)
      : std::runtime_error(what), report_(report) {}
  const SolverReport& report() const { return report_; }

 private:
  SolverReport report_;
};

/// Square sparse matrix in compressed-row form with sorted column indices.
class SparseBandedMatrix {
 public:
  struct Entry {
    std::size_t col;
    double value;
  };

  explicit SparseBandedMatrix(std::size_t n = 0) : rows_(n) {}

  std::size_t size() const { return rows_.size(); }
  /// Adds `value` to entry (row, col), creating it if needed.
  void add(std::size_t row, std::size_t col, double value);
  double at(std::size_t row, std::size_t col) const;
  const std::vector<Entry>& row(std::size_t r) const { return rows_[r]; }

  std::vector<double> multiply(std::span<const double> x) const;
  /// Largest cyclic distance |i - j| mod n over the stored entries.
  std::size_t cyclic_bandwidth() const;

 private:
  std::vector<std::vector<Entry>> rows_;
};

/// J = I + (step / |K|) A(u) with the low-order flux derivatives, lambda^A held
/// fixed. Ghost columns are dropped. `step` is the time step times the stage
/// coefficient.
SparseBandedMatrix assemble_pseudo_jacobian(const SpatialOperator& op, const ExtendedField& u,
                                            std::span<const double> lambda_a, double step,
                                            double t);

/// Direct solve. Cyclic tridiagonal systems use the Thomas algorithm with a
/// Sherman-Morrison correction; everything else goes to a sparse LU.
/// Throws std::runtime_error on a singular matrix.
std::vector<double> linear_solve(const SparseBandedMatrix& a, std::span<const double> rhs);

enum class JacobianMode { Fresh, Frozen };

struct LowOrderSolution {
  CellField u;
  FaceFluxSet fluxes;          // G^L at the solution
  std::vector<double> lambda;  // lambda^A at the solution
  SolverReport report;
};

struct StageSolution {
  CellField y;
  FaceFluxSet fluxes;  // G^H at the stage value
  SolverReport report;
};

/// Newton-type solvers for the implicit systems of one run. Caches the
/// frozen-Jacobian factorisations per step size.
class ImplicitSolver {
 public:
  struct Options {
    JacobianMode mode = JacobianMode::Fresh;
    double low_order_tolerance = 1e-12;
    int low_order_max_iterations = 100;
    double stage_tolerance = 1e-8;
    int stage_max_iterations = 50;
    /// Constant state about which the frozen Jacobian is linearised.
    double frozen_state = 0.0;
    /// Relative tolerance of the preconditioned Krylov solve used in 2D.
    double krylov_tolerance = 1e-13;
    /// Anderson mixing depth for the stage iteration; 0 gives the plain
    /// pseudo-Newton update.
    int acceleration_depth = 0;
  };

  ImplicitSolver(const SpatialOperator& op, Options options);
  ~ImplicitSolver();
  ImplicitSolver(const ImplicitSolver&) = delete;
  ImplicitSolver& operator=(const ImplicitSolver&) = delete;

  const SpatialOperator& op() const { return *op_; }
  const Options& options() const { return options_; }

  /// Backward Euler with the low-order flux: u - u^n + (dt/|K|) sum |S| G^L(u) = 0,
  /// with the fluxes evaluated at time t.
  LowOrderSolution newton_low_order(const CellField& un, double dt, double t) const;

  /// One DIRK stage: y - w + (step/|K|) sum |S| G^H(y) = 0, started from `guess`.
  /// `step` is a_mm dt. A zero step evaluates the stage explicitly.
  StageSolution newton_stage(const CellField& w, const CellField& guess, double step,
                             double t) const;

  /// Residual norms of the two systems (plain Euclidean norm over cells).
  double low_order_residual(const CellField& un, const CellField& u, double dt, double t) const;
  double stage_residual(const CellField& w, const CellField& y, double step, double t) const;

  /// Counters since construction, for diagnostics.
  long long newton_iterations() const { return newton_iterations_; }
  long long linear_solves() const { return linear_solves_; }

 private:
  struct Cache;

  std::vector<double> solve_correction(const ExtendedField& u, std::span<const double> lambda_a,
                                       double step, double t, std::span<const double> rhs) const;

  const SpatialOperator* op_;
  Options options_;
  std::unique_ptr<Cache> cache_;
  mutable long long newton_iterations_ = 0;
  mutable long long linear_solves_ = 0;
};

/// Half the spread of the initial data, the linearisation state of the frozen Jacobian.
double frozen_linearization_state(const CellField& u0);

}  // namespace mppfv
