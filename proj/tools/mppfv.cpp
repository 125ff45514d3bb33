// Command line front end: single runs, convergence studies and snapshots.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "mppfv/harness.hpp"
#include "mppfv/solvers.hpp"

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

void print_run(const mppfv::RunConfig& cfg, const mppfv::RunResult& r) {
  const auto& d = r.diagnostics;
  std::printf("problem=%s scheme=%s cells=%zu dx=%.17g steps=%d t=%.17g delta=%.6e",
              cfg.problem.c_str(), cfg.label().c_str(), r.grid->cell_count(), r.dx, d.steps,
              r.final_time, d.delta);
  if (r.E1) std::printf(" E1=%.6e", *r.E1);
  std::printf(" mass_drift=%.3e newton_iterations=%lld limiter_sweeps=%lld\n",
              d.relative_mass_drift(), r.newton_iterations, r.limiter_sweeps);
  for (const auto& p : r.snapshots) std::printf("snapshot=%s\n", p.string().c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximum-principle-preserving finite volume solver"};
  app.set_config("--config", "", "key=value configuration file; flags override it");

  mppfv::RunConfig cfg;
  double epsilon = -1.0;
  double t_final = -1.0;
  std::string out;

  app.add_option("--problem", cfg.problem, "linear1d|burgers1d|bl1d|steady1d|rotation2d|"
                                           "vortex2d|linear2d|kpp2d")
      ->capture_default_str();
  app.add_option("--epsilon", epsilon, "diffusion parameter for linear1d, linear2d, kpp2d");
  app.add_option("--nx", cfg.nx, "cells along x")->capture_default_str();
  app.add_option("--ny", cfg.ny, "cells along y (default: nx)");
  app.add_option("--scheme", cfg.scheme, "low-be|be|sdirk5|iex1..iex9")->capture_default_str();
  app.add_option("--limiter", cfg.limiter, "none|fct|gmc")->capture_default_str();
  app.add_option("--fct-iters", cfg.fct_iterations, "FCT passes")->capture_default_str();
  app.add_option("--gamma", cfg.gamma, "GMC relaxation parameter")->capture_default_str();
  app.add_option("--dt-factor", cfg.dt_factor, "dt = factor * dx")->capture_default_str();
  app.add_option("--t-final", t_final, "final time (default: the problem's)");
  app.add_option("--solver", cfg.solver, "fresh-jacobian|frozen-jacobian")
      ->capture_default_str();
  app.add_option("--gmc-max-sweeps", cfg.gmc_max_sweeps, "GMC fixed-point sweep limit")
      ->capture_default_str();
  app.add_option("--weno-epsilon", cfg.weno_epsilon, "WENO smoothness regularisation")
      ->capture_default_str();
  app.add_option("--anderson", cfg.anderson_depth, "Anderson mixing depth of stage solves")
      ->capture_default_str();
  app.add_option("--out", out, "output directory for snapshots and study.csv");
  app.add_option("--study", cfg.study, "grid sequence nx1,nx2,... for a convergence study")
      ->delimiter(',');
  app.add_option("--snapshot-times", cfg.snapshot_times, "times t1,t2,... to write snapshots")
      ->delimiter(',');
  app.add_flag("--limit-stages", cfg.limit_stages, "limit every DIRK stage as well");

  CLI11_PARSE(app, argc, argv);
  if (epsilon >= 0.0) cfg.epsilon = epsilon;
  if (t_final > 0.0) cfg.final_time = t_final;
  cfg.output_dir = out;

  try {
    if (!cfg.study.empty()) {
      const auto rows = mppfv::convergence_study(cfg);
      mppfv::write_study_csv(std::cout, rows);
      if (!out.empty()) {
        std::filesystem::create_directories(out);
        std::ofstream os(std::filesystem::path(out) / "study.csv");
        mppfv::write_study_csv(os, rows);
      }
    } else {
      print_run(cfg, mppfv::run(cfg));
    }
  } catch (const mppfv::SolverError& e) {
    std::fprintf(stderr, "error type=solver iterations=%d residual=%.6e message=%s\n",
                 e.report().iterations, e.report().residual, quoted(e.what()).c_str());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error type=input message=%s\n", quoted(e.what()).c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error type=runtime message=%s\n", quoted(e.what()).c_str());
    return 4;
  }
  return 0;
}
