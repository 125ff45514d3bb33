#pragma once

#include <limits>
#include <vector>

#include "mppfv/mesh.hpp"
#include "mppfv/problems.hpp"

namespace mppfv {

/// Running diagnostics of one simulation.
struct RunDiagnostics {
  /// min over recorded states of min(u - u^min, u^max - u); +inf before any update.
  double delta = std::numeric_limits<double>::infinity();
  double initial_mass = 0.0;
  /// Net |S|-weighted flux that has left the domain through Dirichlet faces, times dt.
  double boundary_outflow = 0.0;
  double final_mass = 0.0;
  int steps = 0;

  /// |final - initial + outflow| / max(|initial|, tiny).
  double relative_mass_drift() const;
};

/// Lowers diag.delta with the bound distance of every cell of `u`. An infinite
/// bound contributes nothing.
void update_delta(RunDiagnostics& diag, const CellField& u, const ProblemSpec& spec);

/// Cell averages converted to centre point values with the degree-4 formula,
/// applied along x and then along y in 2D. Ghost values come from the
/// problem's boundary data.
CellField center_point_values(const CellField& u, const ProblemSpec& spec);

/// E1 = |K| sum_i |u~_i - u_exact(x_i, t)|.
double compute_E1(const CellField& u, const ProblemSpec& spec, double t);

/// rate_k = log(E_k / E_{k+1}) / log(h_k / h_{k+1}).
std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& spacings);

/// sum_i |K_i| u_i.
double total_mass(const CellField& u);

}  // namespace mppfv
