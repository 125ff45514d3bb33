#include "mppfv/problems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace mppfv {

namespace {

constexpr double pi = std::numbers::pi;

Vec2 scalar_flux(double v) { return {v, 0.0}; }

std::function<double(const FaceStates&)> constant_speed(double lambda) {
  return [lambda](const FaceStates&) { return lambda; };
}

std::function<double(double, Vec2)> constant_diffusion(double eps) {
  return [eps](double, Vec2) { return eps; };
}

std::function<double(double, Vec2)> zero_derivative() {
  return [](double, Vec2) { return 0.0; };
}

void check_epsilon(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw std::invalid_argument("diffusion parameter must be finite and nonnegative");
}

ProblemSpec base_1d(std::string name, double lo, double hi, BoundaryKind kind) {
  ProblemSpec s;
  s.name = std::move(name);
  s.dim = 1;
  s.domain_lo = {lo, 0.0};
  s.domain_hi = {hi, 1.0};
  s.boundary[0].kind = kind;
  s.boundary[1].kind = BoundaryKind::Periodic;
  return s;
}

ProblemSpec base_unit_square(std::string name) {
  ProblemSpec s;
  s.name = std::move(name);
  s.dim = 2;
  s.domain_lo = {0.0, 0.0};
  s.domain_hi = {1.0, 1.0};
  return s;
}

// Gauss-Legendre nodes and weights on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
    0.2369268850561891};

}  // namespace

double three_body(Vec2 x) {
  const double r_hump = std::hypot(x[0] - 0.25, x[1] - 0.5);
  if (r_hump <= 0.15) return 0.25 + 0.25 * std::cos(pi * r_hump / 0.15);
  const double r_cone = std::hypot(x[0] - 0.5, x[1] - 0.25);
  if (r_cone <= 0.15) return 1.0 - r_cone / 0.15;
  const double r_disk = std::hypot(x[0] - 0.5, x[1] - 0.75);
  const bool in_slot = std::abs(x[0] - 0.5) < 0.025 && x[1] < 0.85;
  if (r_disk <= 0.15 && !in_slot) return 1.0;
  return 0.0;
}

ProblemSpec linear_advdiff_1d(double epsilon) {
  check_epsilon(epsilon);
  auto s = base_1d("linear1d", 0.0, 2.0 * pi, BoundaryKind::Periodic);
  s.flux = [](double u, Vec2, double) { return scalar_flux(u); };
  s.flux_derivative = [](double, Vec2, double) { return scalar_flux(1.0); };
  s.diffusion = constant_diffusion(epsilon);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = constant_speed(1.0);
  s.exact_solution = [epsilon](Vec2 x, double t) {
    const double z = x[0] - t;
    return 0.375 - 0.5 * std::exp(-4.0 * epsilon * t) * std::cos(2.0 * z) +
           0.125 * std::exp(-16.0 * epsilon * t) * std::cos(4.0 * z);
  };
  // The exact solution at t = 0 is sin^4(x); use it directly as the initial state.
  s.initial_condition = [exact = s.exact_solution](Vec2 x) { return exact(x, 0.0); };
  s.u_min = 0.0;
  s.u_max = 1.0;
  s.final_time = 2.0 * pi;
  return s;
}

ProblemSpec burgers_1d() {
  constexpr double eps = 0.01;
  auto s = base_1d("burgers1d", -1.0, 1.0, BoundaryKind::Periodic);
  s.flux = [](double u, Vec2, double) { return scalar_flux(0.5 * u * u); };
  s.flux_derivative = [](double u, Vec2, double) { return scalar_flux(u); };
  s.diffusion = constant_diffusion(eps);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = [](const FaceStates& f) {
    const double m = std::max({std::abs(f.left), std::abs(f.right), std::abs(f.recon_left),
                               std::abs(f.recon_right)});
    return std::max(m, 1e-12);
  };
  s.wave_speed_uses_reconstruction = true;
  s.initial_condition = [](Vec2 x) { return std::abs(x[0]) < 0.5 ? 2.0 : 0.0; };
  s.u_min = 0.0;
  s.u_max = 2.0;
  s.final_time = 0.25;
  return s;
}

ProblemSpec buckley_leverett_1d() {
  constexpr double eps = 0.01;
  auto s = base_1d("bl1d", 0.0, 1.0, BoundaryKind::Dirichlet);
  s.boundary[0].lower = 1.0;
  s.boundary[0].upper = 0.0;
  s.flux = [](double u, Vec2, double) {
    const double d = u * u + (1.0 - u) * (1.0 - u);
    return scalar_flux(u * u / d);
  };
  s.flux_derivative = [](double u, Vec2, double) {
    const double d = u * u + (1.0 - u) * (1.0 - u);
    return scalar_flux(2.0 * u * (1.0 - u) / (d * d));
  };
  s.diffusion = [](double u, Vec2) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return eps * 4.0 * u * (1.0 - u);
  };
  s.diffusion_derivative = [](double u, Vec2) {
    if (u <= 0.0 || u >= 1.0) return 0.0;
    return eps * 4.0 * (1.0 - 2.0 * u);
  };
  s.wave_speed = constant_speed(2.0);
  s.initial_condition = [](Vec2 x) { return x[0] < 1.0 / 3.0 ? 1.0 - 3.0 * x[0] : 0.0; };
  s.u_min = 0.0;
  s.u_max = 1.0;
  s.final_time = 0.2;
  return s;
}

ProblemSpec steady_gaussian_1d() {
  constexpr double eps = 0.01;
  constexpr double sigma2 = 0.01;
  const double sigma = std::sqrt(sigma2);
  auto s = base_1d("steady1d", -1.0, 1.0, BoundaryKind::Dirichlet);
  s.boundary[0].lower = 0.0;
  s.boundary[0].upper = 0.0;
  s.flux = [](double u, Vec2 x, double) { return scalar_flux(-eps * x[0] / sigma2 * u); };
  s.flux_derivative = [](double, Vec2 x, double) { return scalar_flux(-eps * x[0] / sigma2); };
  s.diffusion = constant_diffusion(eps);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = constant_speed(eps / sigma2);
  s.initial_condition = [sigma](Vec2 x) {
    const double sn = std::sin(2.0 * pi * x[0]);
    return std::sqrt(2.0 * pi) * sigma * sn * sn;
  };
  // Only the steady state is known in closed form; it is returned for every t
  // and is meant to be compared against long-time solutions.
  s.exact_solution = [](Vec2 x, double) { return std::exp(-x[0] * x[0] / (2.0 * sigma2)); };
  s.u_min = 0.0;
  s.u_max = std::numeric_limits<double>::infinity();
  s.final_time = 20.0;
  return s;
}

ProblemSpec solid_rotation_2d() {
  auto s = base_unit_square("rotation2d");
  s.flux = [](double u, Vec2 x, double) {
    return Vec2{2.0 * pi * (0.5 - x[1]) * u, 2.0 * pi * (x[0] - 0.5) * u};
  };
  s.flux_derivative = [](double, Vec2 x, double) {
    return Vec2{2.0 * pi * (0.5 - x[1]), 2.0 * pi * (x[0] - 0.5)};
  };
  s.diffusion = constant_diffusion(0.0);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = constant_speed(pi);
  s.initial_condition = three_body;
  s.exact_solution = [](Vec2 x, double t) {
    // Counter-clockwise rotation about (0.5, 0.5) with period 1: trace back.
    const double a = -2.0 * pi * t;
    const double dx = x[0] - 0.5;
    const double dy = x[1] - 0.5;
    Vec2 y{0.5 + std::cos(a) * dx - std::sin(a) * dy, 0.5 + std::sin(a) * dx + std::cos(a) * dy};
    return three_body(y);
  };
  s.u_min = 0.0;
  s.u_max = 1.0;
  s.final_time = 1.0;
  return s;
}

ProblemSpec swirling_vortex_2d(double period) {
  if (!(period > 0.0)) throw std::invalid_argument("swirling vortex period must be positive");
  auto s = base_unit_square("vortex2d");
  auto velocity = [period](Vec2 x, double t) {
    const double sx = std::sin(pi * x[0]);
    const double sy = std::sin(pi * x[1]);
    const double g = std::cos(pi * t / period);
    return Vec2{sx * sx * std::sin(2.0 * pi * x[1]) * g, -sy * sy * std::sin(2.0 * pi * x[0]) * g};
  };
  s.flux = [velocity](double u, Vec2 x, double t) {
    const Vec2 v = velocity(x, t);
    return Vec2{v[0] * u, v[1] * u};
  };
  s.flux_derivative = [velocity](double, Vec2 x, double t) { return velocity(x, t); };
  s.diffusion = constant_diffusion(0.0);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = constant_speed(1.0);
  s.initial_condition = three_body;
  s.exact_solution = [period](Vec2 x, double t) {
    if (t != 0.0 && std::abs(t - period) > 1e-12 * period)
      throw std::domain_error("swirling vortex: exact solution known only at t = 0 and t = T");
    return three_body(x);
  };
  s.u_min = 0.0;
  s.u_max = 1.0;
  s.final_time = period;
  return s;
}

ProblemSpec linear_advdiff_2d(double epsilon) {
  check_epsilon(epsilon);
  ProblemSpec s;
  s.name = "linear2d";
  s.dim = 2;
  s.domain_lo = {0.0, 0.0};
  s.domain_hi = {2.0 * pi, 2.0 * pi};
  s.flux = [](double u, Vec2, double) { return Vec2{u, u}; };
  s.flux_derivative = [](double, Vec2, double) { return Vec2{1.0, 1.0}; };
  s.diffusion = constant_diffusion(epsilon);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = constant_speed(1.0);
  s.exact_solution = [epsilon](Vec2 x, double t) {
    const double z = x[0] + x[1] - 2.0 * t;
    return 0.375 - 0.5 * std::exp(-8.0 * epsilon * t) * std::cos(2.0 * z) +
           0.125 * std::exp(-32.0 * epsilon * t) * std::cos(4.0 * z);
  };
  s.initial_condition = [](Vec2 x) {
    const double sn = std::sin(x[0] + x[1]);
    return sn * sn * sn * sn;
  };
  s.u_min = 0.0;
  s.u_max = 1.0;
  s.final_time = 0.5;
  return s;
}

ProblemSpec kpp_2d(double epsilon) {
  check_epsilon(epsilon);
  ProblemSpec s;
  s.name = "kpp2d";
  s.dim = 2;
  s.domain_lo = {-2.0, -2.5};
  s.domain_hi = {2.0, 1.5};
  s.flux = [](double u, Vec2, double) { return Vec2{std::sin(u), std::cos(u)}; };
  s.flux_derivative = [](double u, Vec2, double) { return Vec2{std::cos(u), -std::sin(u)}; };
  s.diffusion = constant_diffusion(epsilon);
  s.diffusion_derivative = zero_derivative();
  s.wave_speed = constant_speed(1.0);
  s.initial_condition = [](Vec2 x) {
    return std::hypot(x[0], x[1]) <= 1.0 ? 14.0 * pi / 4.0 : pi / 4.0;
  };
  s.u_min = pi / 4.0;
  s.u_max = 14.0 * pi / 4.0;
  s.final_time = 1.0;
  return s;
}

std::vector<std::string> problem_names() {
  return {"linear1d", "burgers1d", "bl1d", "steady1d",
          "rotation2d", "vortex2d", "linear2d", "kpp2d"};
}

ProblemSpec make_problem(std::string_view name, std::optional<double> epsilon) {
  if (name == "linear1d") return linear_advdiff_1d(epsilon.value_or(0.0));
  if (name == "burgers1d") return burgers_1d();
  if (name == "bl1d") return buckley_leverett_1d();
  if (name == "steady1d") return steady_gaussian_1d();
  if (name == "rotation2d") return solid_rotation_2d();
  if (name == "vortex2d") return swirling_vortex_2d();
  if (name == "linear2d") return linear_advdiff_2d(epsilon.value_or(1e-3));
  if (name == "kpp2d") return kpp_2d(epsilon.value_or(0.0));
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

StructuredGrid make_grid(const ProblemSpec& spec, int nx, int ny) {
  if (spec.dim == 1) return StructuredGrid(nx, spec.domain_lo[0], spec.domain_hi[0],
                                           spec.boundary[0].kind);
  return StructuredGrid({nx, ny > 0 ? ny : nx}, spec.domain_lo, spec.domain_hi,
                        {spec.boundary[0].kind, spec.boundary[1].kind});
}

CellField initial_field(const ProblemSpec& spec, const StructuredGrid& grid) {
  CellField u(grid);
  const double hx = grid.spacing(0);
  const double hy = grid.spacing(1);
  for (std::size_t i = 0; i < grid.cell_count(); ++i) {
    const Vec2 c = grid.cell_center(i);
    double sum = 0.0;
    if (grid.dim() == 1) {
      for (std::size_t a = 0; a < 5; ++a)
        sum += 0.5 * kGaussWeights[a] *
               spec.initial_condition({c[0] + 0.5 * hx * kGaussNodes[a], 0.0});
    } else {
      for (std::size_t a = 0; a < 5; ++a)
        for (std::size_t b = 0; b < 5; ++b)
          sum += 0.25 * kGaussWeights[a] * kGaussWeights[b] *
                 spec.initial_condition(
                     {c[0] + 0.5 * hx * kGaussNodes[a], c[1] + 0.5 * hy * kGaussNodes[b]});
    }
    u[i] = sum;
  }
  return u;
}

CellField evaluate_exact(const ProblemSpec& spec, const StructuredGrid& grid, double t) {
  if (!spec.has_exact())
    throw std::invalid_argument("problem '" + spec.name + "' has no exact solution");
  CellField u(grid);
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    u[i] = spec.exact_solution(grid.cell_center(i), t);
  return u;
}

}  // namespace mppfv
