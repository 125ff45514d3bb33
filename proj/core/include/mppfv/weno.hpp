#pragma once

#include <array>

namespace mppfv {

/// Five consecutive cell averages v[-2..2] centred on the reconstruction cell,
/// ordered along the positive axis direction, with uniform spacing h.
struct Stencil5 {
  std::array<double, 5> values{};
  double h = 1.0;
};

/// Which face of the centre cell is reconstructed.
enum class Side { Left, Right };

struct WenoOptions {
  double epsilon = 1e-40;       // regularisation of the smoothness indicators
  int power = 2;                // exponent of (epsilon + beta)
  bool linear_weights = false;  // bypass the nonlinear weights (testing aid)
};

/// Nonlinear weights of the three quadratic candidates, ordered from the
/// leftmost sub-stencil to the rightmost.
std::array<double, 3> weno5_weights(const Stencil5& s, Side side, const WenoOptions& opt = {});

/// Fifth-order WENO value of the centre cell's polynomial at the chosen face.
double weno5_face_value(const Stencil5& s, Side side, const WenoOptions& opt = {});

/// Derivative at the chosen face of the degree-4 polynomial whose cell averages
/// match the stencil. Exact for quartics.
double weno5_face_derivative(const Stencil5& s, Side side);

/// Value at the cell centre of the same degree-4 polynomial. Converts cell
/// averages to point values with fourth-order error.
double center_point_value(const Stencil5& s);

}  // namespace mppfv
