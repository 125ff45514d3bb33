#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mppfv/mesh.hpp"

namespace mppfv {

/// Data handed to a wave-speed policy for one face. `recon_left` is the
/// reconstructed value of the left cell at the face, `recon_right` the one of
/// the right cell. Policies that do not need reconstructed values ignore them.
struct FaceStates {
  double left = 0.0;
  double right = 0.0;
  double recon_left = 0.0;
  double recon_right = 0.0;
  Vec2 midpoint{};
  Vec2 normal{};
  double time = 0.0;
};

/// A scalar convection-diffusion problem u_t + div f(u, x, t) = div(c(u, x) grad u).
///
/// `diffusion` already contains the small parameter, so c(u, x) is the full
/// diffusion coefficient. In 1D only the first flux component is used.
struct ProblemSpec {
  std::string name;

  int dim = 1;
  Vec2 domain_lo{};
  Vec2 domain_hi{};
  std::array<AxisBoundary, 2> boundary{};

  std::function<Vec2(double u, Vec2 x, double t)> flux;
  std::function<Vec2(double u, Vec2 x, double t)> flux_derivative;
  std::function<double(double u, Vec2 x)> diffusion;
  std::function<double(double u, Vec2 x)> diffusion_derivative;
  std::function<double(const FaceStates&)> wave_speed;
  bool wave_speed_uses_reconstruction = false;

  std::function<double(Vec2 x)> initial_condition;
  std::function<double(Vec2 x, double t)> exact_solution;  // empty if unknown

  double u_min = 0.0;
  double u_max = 1.0;
  double final_time = 1.0;

  bool has_exact() const { return static_cast<bool>(exact_solution); }
};

ProblemSpec linear_advdiff_1d(double epsilon);
ProblemSpec burgers_1d();
ProblemSpec buckley_leverett_1d();
ProblemSpec steady_gaussian_1d();
ProblemSpec solid_rotation_2d();
ProblemSpec swirling_vortex_2d(double period = 1.5);
ProblemSpec linear_advdiff_2d(double epsilon = 1e-3);
ProblemSpec kpp_2d(double epsilon);

/// Hump, cone and slotted disk on the unit square.
double three_body(Vec2 x);

/// Builtin lookup by CLI name: linear1d, burgers1d, bl1d, steady1d, rotation2d,
/// vortex2d, linear2d, kpp2d. `epsilon` applies to the problems that take one;
/// when unset their usual value is used (0 for linear1d and kpp2d, 1e-3 for
/// linear2d). Throws std::invalid_argument for unknown names.
ProblemSpec make_problem(std::string_view name, std::optional<double> epsilon = std::nullopt);
std::vector<std::string> problem_names();

/// Uniform grid on the problem domain; `ny` is ignored in 1D.
StructuredGrid make_grid(const ProblemSpec& spec, int nx, int ny = 0);

/// Cell averages of the initial condition by 5x5 Gauss-Legendre quadrature.
CellField initial_field(const ProblemSpec& spec, const StructuredGrid& grid);

/// Point values of the exact solution at cell centers.
CellField evaluate_exact(const ProblemSpec& spec, const StructuredGrid& grid, double t);

}  // namespace mppfv
