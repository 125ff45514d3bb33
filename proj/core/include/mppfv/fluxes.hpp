#pragma once

#include <span>
#include <vector>

#include "mppfv/mesh.hpp"
#include "mppfv/problems.hpp"
#include "mppfv/weno.hpp"

namespace mppfv {

inline constexpr double kWaveSpeedFloor = 1e-12;

/// One value per grid face, oriented from Face::left to Face::right.
using FaceFluxSet = std::vector<double>;

/// Per-face bar-state data of the low-order scheme.
struct BarStateSet {
  std::vector<double> advective;  // u^A
  std::vector<double> diffusive;  // u^D = (u_i + u_j) / 2
  std::vector<double> blended;    // u_ij
  std::vector<double> lambda;     // lambda_ij = lambda^A (1 + 2c / (lambda^A d))
  std::vector<double> lambda_a;   // lambda^A
  std::vector<double> diffusion;  // c_ij
};

/// Rusanov flux n.(f(u_i) + f(u_j))/2 - lambda/2 (u_j - u_i) at the face midpoint.
double low_order_convective_flux(double ui, double uj, const Face& face, const ProblemSpec& spec,
                                 double lambda_a, double t = 0.0);

/// c((u_i + u_j)/2, x_ij) (u_j - u_i) / |x_j - x_i|.
double low_order_diffusive_flux(double ui, double uj, const Face& face, const ProblemSpec& spec);

/// Spatial discretisation of one problem on one grid. Holds references to
/// both, which must outlive the operator.
class SpatialOperator {
 public:
  SpatialOperator(const ProblemSpec& spec, const StructuredGrid& grid, WenoOptions weno = {});

  const ProblemSpec& problem() const { return *spec_; }
  const StructuredGrid& grid() const { return *grid_; }
  const std::vector<Face>& faces() const { return grid_->faces(); }
  std::size_t face_count() const { return grid_->faces().size(); }

  /// Ghost-filled copy of `u` using the problem's boundary data.
  ExtendedField extend(const CellField& u) const;

  /// lambda^A per face. Policies that need reconstructed values get the WENO
  /// face values of the two adjacent cells.
  std::vector<double> wave_speeds(const ExtendedField& u, double t) const;

  FaceFluxSet low_order_fluxes(const ExtendedField& u, std::span<const double> lambda_a,
                               double t) const;
  BarStateSet bar_states(const ExtendedField& u, std::span<const double> lambda_a,
                         double t) const;

  /// F^H - P^H from WENO point values and derivatives at face midpoints.
  /// When `lambda_a_out` is given it receives the lambda^A used per face.
  FaceFluxSet high_order_fluxes(const ExtendedField& u, double t,
                                std::vector<double>* lambda_a_out = nullptr) const;

  /// Sum_j |S_ij| lambda_ij (u_ij - u_i) / |K_i|, i.e. the low-order time derivative.
  CellField low_order_rhs(const CellField& u, double t) const;

  /// a_i = Sum_j |S_ij| lambda_ij per cell.
  std::vector<double> cell_lambda_sums(const BarStateSet& bars) const;

  /// (1/|K_i|) Sum_j |S_ij| G_ij in outward orientation; du/dt = -divergence.
  CellField divergence(const FaceFluxSet& g) const;
  /// out_i += scale * (1/|K_i|) Sum_j |S_ij| G_ij.
  void accumulate_divergence(const FaceFluxSet& g, double scale, std::span<double> out) const;

  /// Net |S|-weighted flux leaving the domain through Dirichlet faces.
  double boundary_outflow(const FaceFluxSet& g) const;

  /// Stencil of the cell left (`right_cell` false) or right of a face.
  Stencil5 stencil(const ExtendedField& u, const Face& face, bool right_cell) const;

  const WenoOptions& weno() const { return weno_; }

 private:
  double value(const ExtendedField& u, std::size_t ext) const { return u.values()[ext]; }

  const ProblemSpec* spec_;
  const StructuredGrid* grid_;
  WenoOptions weno_;
};

}  // namespace mppfv
