#include "mppfv/solvers.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mppfv {

namespace {

using EigenSparse = Eigen::SparseMatrix<double>;
using EigenLU = Eigen::SparseLU<EigenSparse, Eigen::COLAMDOrdering<int>>;

EigenSparse to_eigen(const SparseBandedMatrix& a) {
  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t r = 0; r < a.size(); ++r)
    for (const auto& e : a.row(r))
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(e.col), e.value);
  EigenSparse m(static_cast<int>(a.size()), static_cast<int>(a.size()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Plain Thomas algorithm; a[0] and c[n-1] are ignored.
void thomas(const std::vector<double>& a, const std::vector<double>& b,
            const std::vector<double>& c, std::vector<double>& x) {
  const std::size_t n = b.size();
  std::vector<double> cp(n), dp(n);
  double denom = b[0];
  if (denom == 0.0) throw std::runtime_error("linear_solve: zero pivot");
  cp[0] = c[0] / denom;
  dp[0] = x[0] / denom;
  for (std::size_t i = 1; i < n; ++i) {
    denom = b[i] - a[i] * cp[i - 1];
    if (denom == 0.0) throw std::runtime_error("linear_solve: zero pivot");
    cp[i] = c[i] / denom;
    dp[i] = (x[i] - a[i] * dp[i - 1]) / denom;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
}

std::vector<double> cyclic_thomas(const SparseBandedMatrix& m, std::span<const double> rhs) {
  const std::size_t n = m.size();
  std::vector<double> a(n), b(n), c(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = m.at(i, (i + n - 1) % n);
    b[i] = m.at(i, i);
    c[i] = m.at(i, (i + 1) % n);
  }
  const double alpha = c[n - 1];  // entry (n-1, 0)
  const double beta = a[0];       // entry (0, n-1)
  std::vector<double> x(rhs.begin(), rhs.end());
  if (alpha == 0.0 && beta == 0.0) {
    thomas(a, b, c, x);
    return x;
  }
  const double gamma = -b[0];
  std::vector<double> bb = b;
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - alpha * beta / gamma;
  thomas(a, bb, c, x);
  std::vector<double> z(n, 0.0);
  z[0] = gamma;
  z[n - 1] = alpha;
  thomas(a, bb, c, z);
  const double fact =
      (x[0] + beta * x[n - 1] / gamma) / (1.0 + z[0] + beta * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

std::vector<double> sparse_lu_solve(const EigenSparse& m, std::span<const double> rhs) {
  EigenLU lu;
  lu.compute(m);
  if (lu.info() != Eigen::Success) throw std::runtime_error("linear_solve: singular matrix");
  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  Eigen::VectorXd x = lu.solve(b);
  return {x.data(), x.data() + x.size()};
}

// Adapter that lets BiCGSTAB use an existing sparse LU factorisation.
class FactorizedPreconditioner {
 public:
  FactorizedPreconditioner() = default;
  template <typename M>
  FactorizedPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  FactorizedPreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  FactorizedPreconditioner& compute(const M&) { return *this; }
  template <typename Rhs>
  Eigen::VectorXd solve(const Rhs& b) const {
    if (!lu_) return b;
    return lu_->solve(b);
  }
  Eigen::ComputationInfo info() const { return Eigen::Success; }
  void attach(const EigenLU* lu) { lu_ = lu; }

 private:
  const EigenLU* lu_ = nullptr;
};

// Calls add(row, col, value) for the identity and for every face
// contribution of J = I + (step/|K|) dG^L/du. Ghost columns are skipped.
template <typename Add>
void for_each_jacobian_entry(const SpatialOperator& op, const ExtendedField& u,
                             std::span<const double> lambda_a, double step, double t, Add&& add) {
  const ProblemSpec& spec = op.problem();
  const StructuredGrid& grid = op.grid();
  for (std::size_t i = 0; i < grid.cell_count(); ++i) add(i, i, 1.0);
  const double inv_vol = 1.0 / grid.volume();
  const auto& faces = op.faces();
  const auto v = u.values();
  for (std::size_t k = 0; k < faces.size(); ++k) {
    const Face& f = faces[k];
    const double ul = v[f.left_ext];
    const double ur = v[f.right_ext];
    const double mean = 0.5 * (ul + ur);
    const double c = spec.diffusion(mean, f.midpoint);
    const double cp = spec.diffusion_derivative(mean, f.midpoint);
    const double jump = (ur - ul) / f.distance;
    const double lam = lambda_a[k];
    const double dfl = dot(f.normal, spec.flux_derivative(ul, f.midpoint, t));
    const double dfr = dot(f.normal, spec.flux_derivative(ur, f.midpoint, t));
    const double dgl = 0.5 * dfl + 0.5 * lam - (0.5 * cp * jump - c / f.distance);
    const double dgr = 0.5 * dfr - 0.5 * lam - (0.5 * cp * jump + c / f.distance);
    const double s = step * f.area * inv_vol;
    const bool has_l = f.left != Face::kGhost;
    const bool has_r = f.right != Face::kGhost;
    const auto l = static_cast<std::size_t>(f.left);
    const auto r = static_cast<std::size_t>(f.right);
    if (has_l) {
      add(l, l, s * dgl);
      if (has_r) add(l, r, s * dgr);
    }
    if (has_r) {
      if (has_l) add(r, l, -s * dgl);
      add(r, r, -s * dgr);
    }
  }
}

// Compressed column matrix with the Jacobian's sparsity pattern and a map
// from (row, col) to the slot in its value array, so that refilling the
// values needs no allocation.
class PatternedMatrix {
 public:
  explicit PatternedMatrix(const SpatialOperator& op) {
    const std::size_t n = op.grid().cell_count();
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t i = 0; i < n; ++i) triplets.emplace_back(int(i), int(i), 0.0);
    for (const Face& f : op.faces()) {
      if (f.left == Face::kGhost || f.right == Face::kGhost) continue;
      triplets.emplace_back(f.left, f.right, 0.0);
      triplets.emplace_back(f.right, f.left, 0.0);
    }
    matrix_.resize(int(n), int(n));
    matrix_.setFromTriplets(triplets.begin(), triplets.end());
    matrix_.makeCompressed();
    offsets_.assign(n + 1, 0);
    rows_.clear();
    // Column-major storage: slot of (r, c) is found by a short search in column c.
    for (std::size_t c = 0; c <= n; ++c) offsets_[c] = std::size_t(matrix_.outerIndexPtr()[c]);
    rows_.assign(matrix_.innerIndexPtr(), matrix_.innerIndexPtr() + matrix_.nonZeros());
  }

  void fill(const SpatialOperator& op, const ExtendedField& u, std::span<const double> lambda_a,
            double step, double t) {
    double* values = matrix_.valuePtr();
    std::fill(values, values + matrix_.nonZeros(), 0.0);
    for_each_jacobian_entry(op, u, lambda_a, step, t,
                            [&](std::size_t r, std::size_t c, double v) {
                              values[slot(r, c)] += v;
                            });
  }

  const EigenSparse& matrix() const { return matrix_; }

 private:
  std::size_t slot(std::size_t r, std::size_t c) const {
    for (std::size_t k = offsets_[c]; k < offsets_[c + 1]; ++k)
      if (std::size_t(rows_[k]) == r) return k;
    throw std::logic_error("Jacobian entry outside the sparsity pattern");
  }

  EigenSparse matrix_;
  std::vector<std::size_t> offsets_;
  std::vector<int> rows_;
};

// Anderson mixing of the fixed-point map x -> x + d(x), where d is the
// pseudo-Newton correction. Keeps the last `depth` differences and restarts
// whenever the nonlinear residual grows.
class AndersonMixer {
 public:
  explicit AndersonMixer(int depth) : depth_(depth) {}

  /// Overwrites x with the next iterate given the correction d at x.
  void update(std::span<double> x, std::span<const double> d, double residual) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::Map<Eigen::VectorXd> xv(x.data(), n);
    const Eigen::Map<const Eigen::VectorXd> dv(d.data(), n);
    if (depth_ <= 0) {
      xv += dv;
      return;
    }
    if (has_previous_ && residual > last_residual_) clear();
    const Eigen::VectorXd g = xv + dv;
    if (has_previous_) {
      df_.push_back(dv - f_prev_);
      dg_.push_back(g - g_prev_);
      if (static_cast<int>(df_.size()) > depth_) {
        df_.erase(df_.begin());
        dg_.erase(dg_.begin());
      }
    }
    f_prev_ = dv;
    g_prev_ = g;
    has_previous_ = true;
    last_residual_ = residual;
    if (df_.empty()) {
      xv = g;
      return;
    }
    const auto m = static_cast<Eigen::Index>(df_.size());
    Eigen::MatrixXd f(n, m), gm(n, m);
    for (Eigen::Index k = 0; k < m; ++k) {
      f.col(k) = df_[k];
      gm.col(k) = dg_[k];
    }
    const Eigen::VectorXd gamma = f.colPivHouseholderQr().solve(dv);
    if (!gamma.allFinite()) {
      clear();
      xv = g;
      return;
    }
    xv = g - gm * gamma;
  }

 private:
  void clear() {
    df_.clear();
    dg_.clear();
    has_previous_ = false;
  }

  int depth_;
  std::vector<Eigen::VectorXd> df_, dg_;
  Eigen::VectorXd f_prev_, g_prev_;
  bool has_previous_ = false;
  double last_residual_ = 0.0;
};

}  // namespace

void SparseBandedMatrix::add(std::size_t r, std::size_t col, double value) {
  auto& entries = rows_[r];
  auto it = std::lower_bound(entries.begin(), entries.end(), col,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  if (it != entries.end() && it->col == col) {
    it->value += value;
  } else {
    entries.insert(it, Entry{col, value});
  }
}

double SparseBandedMatrix::at(std::size_t r, std::size_t col) const {
  const auto& entries = rows_[r];
  auto it = std::lower_bound(entries.begin(), entries.end(), col,
                             [](const Entry& e, std::size_t c) { return e.col < c; });
  return it != entries.end() && it->col == col ? it->value : 0.0;
}

std::vector<double> SparseBandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(size(), 0.0);
  for (std::size_t r = 0; r < size(); ++r)
    for (const auto& e : rows_[r]) y[r] += e.value * x[e.col];
  return y;
}

std::size_t SparseBandedMatrix::cyclic_bandwidth() const {
  const std::size_t n = size();
  std::size_t w = 0;
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& e : rows_[r]) {
      const std::size_t d = r > e.col ? r - e.col : e.col - r;
      w = std::max(w, std::min(d, n - d));
    }
  return w;
}

SparseBandedMatrix assemble_pseudo_jacobian(const SpatialOperator& op, const ExtendedField& u,
                                            std::span<const double> lambda_a, double step,
                                            double t) {
  SparseBandedMatrix j(op.grid().cell_count());
  for_each_jacobian_entry(op, u, lambda_a, step, t,
                          [&j](std::size_t r, std::size_t c, double v) { j.add(r, c, v); });
  return j;
}

std::vector<double> linear_solve(const SparseBandedMatrix& a, std::span<const double> rhs) {
  if (rhs.size() != a.size()) throw std::invalid_argument("linear_solve: size mismatch");
  if (a.size() >= 3 && a.cyclic_bandwidth() <= 1) return cyclic_thomas(a, rhs);
  return sparse_lu_solve(to_eigen(a), rhs);
}

double frozen_linearization_state(const CellField& u0) {
  const auto [lo, hi] = std::minmax_element(u0.values().begin(), u0.values().end());
  return 0.5 * (*hi - *lo);
}

struct ImplicitSolver::Cache {
  struct Frozen {
    EigenSparse matrix;
    EigenLU lu;
  };
  std::map<double, std::unique_ptr<Frozen>> frozen;
  std::unique_ptr<PatternedMatrix> fresh;
  bool have_time = false;
  double time = 0.0;
};

ImplicitSolver::ImplicitSolver(const SpatialOperator& op, Options options)
    : op_(&op), options_(options), cache_(std::make_unique<Cache>()) {}

ImplicitSolver::~ImplicitSolver() = default;

std::vector<double> ImplicitSolver::solve_correction(const ExtendedField& u,
                                                     std::span<const double> lambda_a,
                                                     double step, double t,
                                                     std::span<const double> rhs) const {
  ++linear_solves_;
  const StructuredGrid& grid = op_->grid();

  // Factorisation of the Jacobian linearised about a constant state, built the
  // first time a step size is seen.
  auto frozen = [&]() -> Cache::Frozen& {
    auto& slot = cache_->frozen[step];
    if (!slot) {
      if (!cache_->have_time) {
        cache_->have_time = true;
        cache_->time = t;
      }
      const CellField constant(grid, options_.frozen_state);
      const ExtendedField ext = op_->extend(constant);
      // Boundary ghosts keep their data; only the interior is linearised.
      const auto lam = op_->wave_speeds(ext, cache_->time);
      PatternedMatrix j(*op_);
      j.fill(*op_, ext, lam, step, cache_->time);
      slot = std::make_unique<Cache::Frozen>();
      slot->matrix = j.matrix();
      slot->lu.compute(slot->matrix);
      if (slot->lu.info() != Eigen::Success)
        throw std::runtime_error("frozen Jacobian factorisation failed");
    }
    return *slot;
  };

  Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));

  if (options_.mode == JacobianMode::Frozen) {
    Eigen::VectorXd x = frozen().lu.solve(b);
    return {x.data(), x.data() + x.size()};
  }

  if (grid.dim() == 1) return linear_solve(assemble_pseudo_jacobian(*op_, u, lambda_a, step, t), rhs);

  if (!cache_->fresh) cache_->fresh = std::make_unique<PatternedMatrix>(*op_);
  cache_->fresh->fill(*op_, u, lambda_a, step, t);
  const EigenSparse& m = cache_->fresh->matrix();
  const Cache::Frozen& pre = frozen();
  // Constant-coefficient problems reproduce the frozen matrix exactly.
  const Eigen::Map<const Eigen::ArrayXd> fresh_values(m.valuePtr(), m.nonZeros());
  const Eigen::Map<const Eigen::ArrayXd> frozen_values(pre.matrix.valuePtr(),
                                                       pre.matrix.nonZeros());
  if ((fresh_values == frozen_values).all()) {
    Eigen::VectorXd x = pre.lu.solve(b);
    return {x.data(), x.data() + x.size()};
  }
  Eigen::BiCGSTAB<EigenSparse, FactorizedPreconditioner> krylov;
  krylov.preconditioner().attach(&pre.lu);
  krylov.setTolerance(options_.krylov_tolerance);
  krylov.setMaxIterations(200);
  krylov.compute(m);
  Eigen::VectorXd x = krylov.solve(b);
  if (krylov.info() == Eigen::Success) return {x.data(), x.data() + x.size()};
  return sparse_lu_solve(m, rhs);
}

double ImplicitSolver::low_order_residual(const CellField& un, const CellField& u, double dt,
                                          double t) const {
  const ExtendedField ext = op_->extend(u);
  const auto lam = op_->wave_speeds(ext, t);
  const FaceFluxSet g = op_->low_order_fluxes(ext, lam, t);
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] - un[i];
  op_->accumulate_divergence(g, dt, r);
  return norm2(r);
}

double ImplicitSolver::stage_residual(const CellField& w, const CellField& y, double step,
                                      double t) const {
  const FaceFluxSet g = op_->high_order_fluxes(op_->extend(y), t);
  std::vector<double> r(y.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - w[i];
  op_->accumulate_divergence(g, step, r);
  return norm2(r);
}

LowOrderSolution ImplicitSolver::newton_low_order(const CellField& un, double dt,
                                                  double t) const {
  if (!(dt > 0.0)) throw std::invalid_argument("newton_low_order: dt must be positive");
  CellField u = un;
  std::vector<double> r(u.size());
  SolverReport report;
  for (int it = 0;; ++it) {
    const ExtendedField ext = op_->extend(u);
    auto lam = op_->wave_speeds(ext, t);
    FaceFluxSet g = op_->low_order_fluxes(ext, lam, t);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i] - un[i];
    op_->accumulate_divergence(g, dt, r);
    report.iterations = it;
    report.residual = norm2(r);
    if (report.residual <= options_.low_order_tolerance) {
      report.converged = true;
      return {std::move(u), std::move(g), std::move(lam), report};
    }
    if (it >= options_.low_order_max_iterations || !std::isfinite(report.residual))
      throw SolverError("low-order Newton did not converge", report);
    for (double& x : r) x = -x;
    const auto delta = solve_correction(ext, lam, dt, t, r);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += delta[i];
    ++newton_iterations_;
  }
}

StageSolution ImplicitSolver::newton_stage(const CellField& w, const CellField& guess,
                                           double step, double t) const {
  SolverReport report;
  if (step == 0.0) {
    FaceFluxSet g = op_->high_order_fluxes(op_->extend(w), t);
    report.converged = true;
    return {w, std::move(g), report};
  }
  if (!(step > 0.0)) throw std::invalid_argument("newton_stage: step must be nonnegative");
  CellField y = guess;
  std::vector<double> r(y.size());
  std::vector<double> lam;
  AndersonMixer mixer(options_.acceleration_depth);
  for (int it = 0;; ++it) {
    const ExtendedField ext = op_->extend(y);
    FaceFluxSet g = op_->high_order_fluxes(ext, t, &lam);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = y[i] - w[i];
    op_->accumulate_divergence(g, step, r);
    report.iterations = it;
    report.residual = norm2(r);
    if (report.residual <= options_.stage_tolerance) {
      report.converged = true;
      return {std::move(y), std::move(g), report};
    }
    if (it >= options_.stage_max_iterations || !std::isfinite(report.residual))
      throw SolverError("stage Newton did not converge", report);
    for (double& x : r) x = -x;
    const auto delta = solve_correction(ext, lam, step, t, r);
    mixer.update(y.values(), delta, report.residual);
    ++newton_iterations_;
  }
}

}  // namespace mppfv
