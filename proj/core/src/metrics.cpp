#include "mppfv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mppfv/weno.hpp"

namespace mppfv {

double RunDiagnostics::relative_mass_drift() const {
  const double denom = std::max(std::abs(initial_mass), 1e-300);
  return std::abs(final_mass - initial_mass + boundary_outflow) / denom;
}

void update_delta(RunDiagnostics& diag, const CellField& u, const ProblemSpec& spec) {
  double d = diag.delta;
  for (double v : u.values()) {
    if (std::isfinite(spec.u_min)) d = std::min(d, v - spec.u_min);
    if (std::isfinite(spec.u_max)) d = std::min(d, spec.u_max - v);
  }
  diag.delta = d;
}

CellField center_point_values(const CellField& u, const ProblemSpec& spec) {
  const StructuredGrid& grid = u.grid();
  const std::span<const AxisBoundary> bc(spec.boundary.data(), 2);
  CellField out = u;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const ExtendedField ext = ghost_fill(out, bc, 2);
    CellField next(grid);
    for (int iy = 0; iy < grid.cells(1); ++iy) {
      for (int ix = 0; ix < grid.cells(0); ++ix) {
        Stencil5 s;
        for (int k = -2; k <= 2; ++k)
          s.values[k + 2] = axis == 0 ? ext.at(ix + k, iy) : ext.at(ix, iy + k);
        next[grid.index(ix, iy)] = center_point_value(s);
      }
    }
    out = std::move(next);
  }
  return out;
}

double compute_E1(const CellField& u, const ProblemSpec& spec, double t) {
  if (!spec.has_exact())
    throw std::invalid_argument("compute_E1: problem '" + spec.name + "' has no exact solution");
  const StructuredGrid& grid = u.grid();
  const CellField point = center_point_values(u, spec);
  double sum = 0.0;
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    sum += std::abs(point[i] - spec.exact_solution(grid.cell_center(i), t));
  return grid.volume() * sum;
}

std::vector<double> eoc(const std::vector<double>& errors, const std::vector<double>& spacings) {
  if (errors.size() != spacings.size())
    throw std::invalid_argument("eoc: errors and spacings differ in length");
  std::vector<double> rates;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k)
    rates.push_back(std::log(errors[k] / errors[k + 1]) / std::log(spacings[k] / spacings[k + 1]));
  return rates;
}

double total_mass(const CellField& u) {
  double s = 0.0;
  for (double v : u.values()) s += v;
  return u.grid().volume() * s;
}

}  // namespace mppfv
