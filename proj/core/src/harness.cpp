#include "mppfv/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mppfv/fluxes.hpp"
#include "mppfv/limiters.hpp"
#include "mppfv/solvers.hpp"
#include "mppfv/time_integration.hpp"

namespace mppfv {

namespace {

bool is_iex(const std::string& scheme) { return scheme.rfind("iex", 0) == 0; }

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void lower_delta(double& delta, const CellField& u, const ProblemSpec& spec) {
  RunDiagnostics d;
  d.delta = delta;
  update_delta(d, u, spec);
  delta = d.delta;
}

}  // namespace

void RunConfig::validate() const {
  if (nx <= 0 || ny < 0) throw std::invalid_argument("cell counts must be positive");
  if (!(dt_factor > 0.0)) throw std::invalid_argument("dt factor must be positive");
  if (fct_iterations < 1) throw std::invalid_argument("fct iterations must be at least 1");
  if (anderson_depth < 0) throw std::invalid_argument("anderson depth must be nonnegative");
  if (gamma < 0.0) throw std::invalid_argument("gamma must be nonnegative");
  if (!(weno_epsilon > 0.0)) throw std::invalid_argument("weno epsilon must be positive");
  if (final_time && !(*final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  if (solver != "fresh-jacobian" && solver != "frozen-jacobian")
    throw std::invalid_argument("unknown solver mode '" + solver + "'");
  limiter_from_name(limiter);
  if (scheme != "low-be") tableau_by_name(scheme);
  for (std::size_t k = 1; k < study.size(); ++k)
    if (study[k] != 2 * study[k - 1])
      throw std::invalid_argument("study grids must refine by a factor of 2");
}

std::string RunConfig::label() const {
  std::string s = scheme;
  if (scheme == "low-be") return s;
  if (limiter == "fct") s += "+fct(" + std::to_string(fct_iterations) + " iter)";
  if (limiter == "gmc") {
    std::ostringstream g;
    g << gamma;
    s += "+gmc(gamma=" + g.str() + ")";
  }
  if (limit_stages && limiter != "none") s += "+stages";
  return s;
}

RunResult run(const RunConfig& config) {
  config.validate();
  auto spec = std::make_shared<const ProblemSpec>(make_problem(config.problem, config.epsilon));
  auto grid = std::make_shared<const StructuredGrid>(make_grid(*spec, config.nx, config.ny));
  const SpatialOperator op(*spec, *grid, WenoOptions{config.weno_epsilon});

  RunResult result{spec, grid, initial_field(*spec, *grid), {},
                   std::numeric_limits<double>::infinity(), 0.0, grid->spacing(0), {}, 0, 0, {}};
  CellField& u = result.u;

  ImplicitSolver::Options sopt;
  sopt.mode = config.solver == "frozen-jacobian" ? JacobianMode::Frozen : JacobianMode::Fresh;
  sopt.frozen_state = frozen_linearization_state(u);
  sopt.acceleration_depth = config.anderson_depth;
  const ImplicitSolver solver(op, sopt);

  LimiterConfig lim;
  lim.kind = limiter_from_name(config.limiter);
  lim.fct_iterations = config.fct_iterations;
  lim.gmc.gamma = config.gamma;
  lim.gmc.max_sweeps = config.gmc_max_sweeps;

  const bool low_order = config.scheme == "low-be";
  const ButcherTableau tableau =
      low_order ? backward_euler_tableau() : tableau_by_name(config.scheme);
  const int iex_order = is_iex(config.scheme) ? config.scheme[3] - '0' : 0;

  const double T = config.final_time.value_or(spec->final_time);
  const double dt0 = config.dt_factor * grid->spacing(0);
  std::vector<double> snaps = config.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::remove_if(snaps.begin(), snaps.end(),
                             [T](double s) { return !(s > 0.0) || s > T; }),
              snaps.end());
  std::size_t next_snap = 0;

  if (!config.output_dir.empty()) std::filesystem::create_directories(config.output_dir);
  auto snapshot = [&](const std::string& name) {
    if (config.output_dir.empty()) return;
    const auto path = config.output_dir / name;
    write_snapshot(u, path);
    result.snapshots.push_back(path);
  };

  RunDiagnostics& diag = result.diagnostics;
  diag.initial_mass = total_mass(u);
  const double t_tol = 1e-12 * T;

  double t = 0.0;
  while (T - t > t_tol) {
    double target = std::min(t + dt0, T);
    bool hits_snapshot = false;
    if (next_snap < snaps.size() && snaps[next_snap] <= target + t_tol) {
      target = snaps[next_snap];
      hits_snapshot = true;
    }
    // Avoid a sliver step at the end.
    if (T - target <= t_tol) target = T;
    const double dt = target - t;

    FaceFluxSet flux;
    if (low_order) {
      LowOrderSolution s = solver.newton_low_order(u, dt, target);
      result.newton_iterations += s.report.iterations;
      u = std::move(s.u);
      flux = std::move(s.fluxes);
    } else if (iex_order > 0) {
      SubstepSolver sub;
      if (lim.kind == LimiterKind::Gmc) {
        sub = [&](const CellField& v, double h, double t_new) {
          Substep r = gmc_implicit_euler_substep(op, v, h, t_new, lim.gmc);
          result.limiter_sweeps += r.report.iterations;
          return r;
        };
      }
      IexResult r = iex_step(solver, iex_order, u, t, dt, sub);
      for (const auto& y : r.substeps) lower_delta(result.stage_delta, y, *spec);
      for (const auto& rep : r.reports) result.newton_iterations += rep.iterations;
      if (lim.kind == LimiterKind::None) {
        u = std::move(r.u);
        flux = std::move(r.flux);
      } else {
        // The substeps are bounded, but their extrapolated combination is not.
        LimitedStep l = limit_step(solver, u, r.flux, target, dt, lim);
        if (lim.kind == LimiterKind::Gmc) result.limiter_sweeps += l.report.iterations;
        u = std::move(l.u);
        flux = std::move(l.flux);
      }
    } else if (config.limit_stages && lim.kind != LimiterKind::None) {
      StepResult r = stage_limited_dirk_step(solver, tableau, u, t, dt, lim);
      for (const auto& y : r.stages.values) lower_delta(result.stage_delta, y, *spec);
      for (const auto& rep : r.reports) result.newton_iterations += rep.iterations;
      u = std::move(r.u);
      flux = std::move(r.flux);
    } else {
      StepResult r = dirk_step(solver, tableau, u, t, dt);
      for (const auto& y : r.stages.values) lower_delta(result.stage_delta, y, *spec);
      for (const auto& rep : r.reports) result.newton_iterations += rep.iterations;
      if (lim.kind == LimiterKind::None) {
        u = std::move(r.u);
        flux = std::move(r.flux);
      } else {
        LimitedStep l = limit_step(solver, u, r.flux, target, dt, lim);
        if (lim.kind == LimiterKind::Gmc) result.limiter_sweeps += l.report.iterations;
        u = std::move(l.u);
        flux = std::move(l.flux);
      }
    }

    t = target;
    ++diag.steps;
    update_delta(diag, u, *spec);
    diag.boundary_outflow += dt * op.boundary_outflow(flux);
    if (hits_snapshot) {
      snapshot("u_t" + format_number(t) + ".csv");
      ++next_snap;
    }
  }

  diag.final_mass = total_mass(u);
  result.final_time = t;
  if (spec->has_exact()) {
    try {
      result.E1 = compute_E1(u, *spec, t);
    } catch (const std::domain_error&) {
      result.E1.reset();
    }
  }
  snapshot("final.csv");
  return result;
}

std::vector<StudyRow> convergence_study(const RunConfig& config) {
  std::vector<int> grids = config.study.empty() ? std::vector<int>{config.nx} : config.study;
  std::vector<StudyRow> rows;
  for (int n : grids) {
    RunConfig c = config;
    c.nx = n;
    c.ny = config.ny > 0 ? config.ny * n / grids.front() : 0;
    c.study.clear();
    const RunResult r = run(c);
    if (!r.E1) throw std::invalid_argument("convergence study needs an exact solution");
    StudyRow row;
    row.scheme = config.label();
    row.dx = r.dx;
    row.cells = n;
    row.E1 = *r.E1;
    row.delta = r.diagnostics.delta;
    if (!rows.empty())
      row.rate = eoc({rows.back().E1, row.E1}, {rows.back().dx, row.dx}).front();
    rows.push_back(row);
  }
  return rows;
}

void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows) {
  os << "scheme,dx,cells,E1,rate,delta\n";
  char buf[256];
  for (const auto& r : rows) {
    std::string rate = r.rate ? format_number(*r.rate) : "";
    std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%.17g,%s,%.17g\n", r.scheme.c_str(), r.dx,
                  r.cells, r.E1, rate.c_str(), r.delta);
    os << buf;
  }
}

void write_snapshot(const CellField& u, std::ostream& os) {
  const StructuredGrid& grid = u.grid();
  os << (grid.dim() == 1 ? "x,u\n" : "x,y,u\n");
  char buf[128];
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    const Vec2 x = grid.cell_center(i);
    if (grid.dim() == 1)
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", x[0], u[i]);
    else
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", x[0], x[1], u[i]);
    os << buf;
  }
}

void write_snapshot(const CellField& u, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_snapshot(u, os);
  if (!os) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<double> read_snapshot_values(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  std::getline(is, line);
  std::vector<double> values;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.rfind(',');
    values.push_back(std::stod(line.substr(comma + 1)));
  }
  return values;
}

}  // namespace mppfv
