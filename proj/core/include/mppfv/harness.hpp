#pragma once

#include <filesystem>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mppfv/metrics.hpp"
#include "mppfv/problems.hpp"
#include "mppfv/weno.hpp"

namespace mppfv {

struct RunConfig {
  std::string problem = "linear1d";
  std::optional<double> epsilon;  // overrides the problem's default where it has one
  int nx = 100;
  int ny = 0;  // 0 means ny = nx
  /// "low-be" (low-order backward Euler), "be", "sdirk5" or "iex1".."iex9".
  std::string scheme = "sdirk5";
  std::string limiter = "none";  // none | fct | gmc
  int fct_iterations = 1;
  double gamma = 0.0;
  double dt_factor = 0.5;  // dt = dt_factor * dx
  std::optional<double> final_time;
  std::string solver = "fresh-jacobian";  // or frozen-jacobian
  bool limit_stages = false;
  int gmc_max_sweeps = 5000;
  double weno_epsilon = WenoOptions{}.epsilon;  // WENO smoothness regularisation
  int anderson_depth = 5;  // Anderson mixing depth of the stage iterations, 0 disables
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir;  // empty: write nothing
  std::vector<int> study;            // grid sequence for convergence studies

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
  /// Short label used in tables, e.g. "sdirk5+gmc(gamma=0)".
  std::string label() const;
};

struct RunResult {
  std::shared_ptr<const ProblemSpec> problem;
  std::shared_ptr<const StructuredGrid> grid;
  CellField u;
  RunDiagnostics diagnostics;
  /// Bound distance over every stage or substep value, when the scheme has any.
  double stage_delta = std::numeric_limits<double>::infinity();
  double final_time = 0.0;
  double dx = 0.0;
  std::optional<double> E1;
  long long newton_iterations = 0;
  long long limiter_sweeps = 0;
  std::vector<std::filesystem::path> snapshots;
};

/// Runs one simulation from t = 0 to the final time.
RunResult run(const RunConfig& config);

struct StudyRow {
  std::string scheme;
  double dx = 0.0;
  int cells = 0;
  double E1 = 0.0;
  std::optional<double> rate;
  double delta = 0.0;
};

/// One run per grid in config.study (or just config.nx); E1 at the final time.
std::vector<StudyRow> convergence_study(const RunConfig& config);
void write_study_csv(std::ostream& os, const std::vector<StudyRow>& rows);

/// `x[,y],u` with one row per cell centre and 17 significant digits.
void write_snapshot(const CellField& u, const std::filesystem::path& path);
void write_snapshot(const CellField& u, std::ostream& os);
/// Values column of a snapshot file, in file order.
std::vector<double> read_snapshot_values(const std::filesystem::path& path);

}  // namespace mppfv
