#include "mppfv/time_integration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace mppfv {

namespace {

struct Fraction {
  std::int64_t num;
  std::int64_t den;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

constexpr Fraction kSdirkGamma{4024571134387, 14474071345096};

// Strictly lower part of the SDIRK5 matrix, row by row.
const std::vector<std::vector<Fraction>> kSdirkLower = {
    {},
    {{9365021263232, 12572342979331}},
    {{2144716224527, 9320917548702}, {-397905335951, 4008788611757}},
    {{-291541413000, 6267936762551}, {226761949132, 4473940808273},
     {-1282248297070, 9697416712681}},
    {{-2481679516057, 4626464057815}, {-197112422687, 6604378783090},
     {3952887910906, 9713059315593}, {4906835613583, 8134926921134}},
};

constexpr Fraction kSdirkB[] = {{-2522702558582, 12162329469185},
                                {1018267903655, 12907234417901},
                                {4542392826351, 13702606430957},
                                {5001116467727, 12224457745473},
                                {1509636094297, 3891594770934}};

constexpr Fraction kSdirkC[] = {{4024571134387, 14474071345096},
                                {5555633399575, 5431021154178},
                                {5255299487392, 12852514622453},
                                {3, 20},
                                {10449500210709, 14474071345096}};

}  // namespace

void ButcherTableau::validate(double tol) const {
  const std::size_t m = b.size();
  if (m == 0) throw std::invalid_argument(name + ": empty tableau");
  if (a.size() != m || c.size() != m) throw std::invalid_argument(name + ": inconsistent sizes");
  double bsum = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i].size() != m) throw std::invalid_argument(name + ": A is not square");
    double row = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (j > i && a[i][j] != 0.0)
        throw std::invalid_argument(name + ": A is not lower triangular");
      row += a[i][j];
    }
    if (std::abs(row - c[i]) > tol)
      throw std::invalid_argument(name + ": row sum of A differs from c");
    bsum += b[i];
  }
  if (std::abs(bsum - 1.0) > tol) throw std::invalid_argument(name + ": weights do not sum to 1");
}

ButcherTableau backward_euler_tableau() {
  return ButcherTableau{"be", 1, {{1.0}}, {1.0}, {1.0}};
}

ButcherTableau sdirk5_tableau() {
  ButcherTableau t;
  t.name = "sdirk5";
  t.order = 5;
  const std::size_t m = 5;
  t.a.assign(m, std::vector<double>(m, 0.0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < i; ++j) t.a[i][j] = kSdirkLower[i][j].value();
    t.a[i][i] = kSdirkGamma.value();
    t.b.push_back(kSdirkB[i].value());
    t.c.push_back(kSdirkC[i].value());
  }
  return t;
}

std::vector<double> extrapolation_weights(int p) {
  if (p < 1) throw std::invalid_argument("extrapolation order must be at least 1");
  std::vector<double> w(p, 1.0);
  for (int k = 1; k <= p; ++k)
    for (int l = 1; l <= p; ++l)
      if (l != k) w[k - 1] *= static_cast<double>(k) / static_cast<double>(k - l);
  return w;
}

ButcherTableau iex_tableau(int p) {
  if (p < 1) throw std::invalid_argument("iex_tableau: p must be at least 1");
  const auto w = extrapolation_weights(p);
  const int m = p * (p + 1) / 2;
  ButcherTableau t;
  t.name = "iex" + std::to_string(p);
  t.order = p;
  t.a.assign(m, std::vector<double>(m, 0.0));
  int first = 0;
  for (int k = 1; k <= p; ++k) {
    for (int s = 0; s < k; ++s) {
      const int row = first + s;
      for (int q = 0; q <= s; ++q) t.a[row][first + q] = 1.0 / k;
      t.b.push_back(w[k - 1] / k);
      t.c.push_back(static_cast<double>(s + 1) / k);
    }
    first += k;
  }
  return t;
}

ButcherTableau tableau_by_name(std::string_view name) {
  if (name == "be") return backward_euler_tableau();
  if (name == "sdirk5") return sdirk5_tableau();
  if (name.size() == 4 && name.substr(0, 3) == "iex" && name[3] >= '1' && name[3] <= '9')
    return iex_tableau(name[3] - '0');
  throw std::invalid_argument("unknown time integrator '" + std::string(name) + "'");
}

bool check_ssp_stages(const ButcherTableau& t, double mu, double tol) {
  const int m = t.stages();
  Eigen::MatrixXd a(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) a(i, j) = t.a[i][j];
  const Eigen::MatrixXd shifted = Eigen::MatrixXd::Identity(m, m) + mu * a;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(shifted);
  if (!lu.isInvertible()) throw std::invalid_argument("check_ssp_stages: I + mu A is singular");
  const Eigen::MatrixXd ax = a * lu.inverse();
  if ((ax.array() < -tol).any()) return false;
  const Eigen::VectorXd row = ax.rowwise().sum();
  return !(row.array() > 1.0 + tol).any();
}

StepResult dirk_step(const ImplicitSolver& solver, const ButcherTableau& tableau,
                     const CellField& un, double t, double dt) {
  const SpatialOperator& op = solver.op();
  const int m = tableau.stages();
  StepResult out{un, FaceFluxSet(op.face_count(), 0.0), {}, {}};
  out.stages.values.reserve(m);
  out.stages.fluxes.reserve(m);

  for (int s = 0; s < m; ++s) {
    CellField w = un;
    for (int q = 0; q < s; ++q) {
      const double aq = tableau.a[s][q];
      if (aq != 0.0) op.accumulate_divergence(out.stages.fluxes[q], -dt * aq, w.values());
    }
    const CellField& guess = s == 0 ? un : out.stages.values.back();
    StageSolution st =
        solver.newton_stage(w, guess, tableau.a[s][s] * dt, t + tableau.c[s] * dt);
    out.reports.push_back(st.report);
    out.stages.values.push_back(std::move(st.y));
    out.stages.fluxes.push_back(std::move(st.fluxes));
  }

  for (int s = 0; s < m; ++s) {
    const auto& g = out.stages.fluxes[s];
    for (std::size_t k = 0; k < g.size(); ++k) out.flux[k] += tableau.b[s] * g[k];
  }
  op.accumulate_divergence(out.flux, -dt, out.u.values());
  return out;
}

IexResult iex_step(const ImplicitSolver& solver, int p, const CellField& un, double t, double dt,
                   const SubstepSolver& substep) {
  if (p < 1) throw std::invalid_argument("iex_step: p must be at least 1");
  const SpatialOperator& op = solver.op();
  SubstepSolver step = substep;
  if (!step) {
    step = [&solver](const CellField& u, double h, double t_new) {
      StageSolution s = solver.newton_stage(u, u, h, t_new);
      return Substep{std::move(s.y), std::move(s.fluxes), s.report};
    };
  }

  IexResult out{un, un, {}, {}, {}};
  std::vector<CellField> values;
  std::vector<FaceFluxSet> fluxes;
  for (int k = 1; k <= p; ++k) {
    const double h = dt / k;
    CellField u = un;
    FaceFluxSet mean(op.face_count(), 0.0);
    for (int s = 1; s <= k; ++s) {
      Substep r = step(u, h, t + s * h);
      out.reports.push_back(r.report);
      for (std::size_t f = 0; f < mean.size(); ++f) mean[f] += r.flux[f] / k;
      u = std::move(r.u);
      out.substeps.push_back(u);
    }
    values.push_back(std::move(u));
    fluxes.push_back(std::move(mean));
  }

  extrapolate_t_table(values, [](CellField& dst, const CellField& a, const CellField& b,
                                 double s) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] + s * (a[i] - b[i]);
  });
  extrapolate_t_table(fluxes, [](FaceFluxSet& dst, const FaceFluxSet& a, const FaceFluxSet& b,
                                 double s) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] + s * (a[i] - b[i]);
  });

  out.extrapolated = std::move(values.back());
  out.flux = std::move(fluxes.back());
  out.u = un;
  op.accumulate_divergence(out.flux, -dt, out.u.values());
  return out;
}

}  // namespace mppfv
