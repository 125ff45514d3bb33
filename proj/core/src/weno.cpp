#include "mppfv/weno.hpp"

#include <cmath>

namespace mppfv {

namespace {

// For the left face, reverse the stencil and reconstruct at the right face of
// the mirrored cell.
std::array<double, 5> oriented(const Stencil5& s, Side side) {
  const auto& v = s.values;
  if (side == Side::Right) return v;
  return {v[4], v[3], v[2], v[1], v[0]};
}

std::array<double, 3> candidates(const std::array<double, 5>& v) {
  return {(2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0,
          (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0,
          (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0};
}

std::array<double, 3> smoothness(const std::array<double, 5>& v) {
  auto sq = [](double a) { return a * a; };
  constexpr double k = 13.0 / 12.0;
  return {k * sq(v[0] - 2.0 * v[1] + v[2]) + 0.25 * sq(v[0] - 4.0 * v[1] + 3.0 * v[2]),
          k * sq(v[1] - 2.0 * v[2] + v[3]) + 0.25 * sq(v[1] - v[3]),
          k * sq(v[2] - 2.0 * v[3] + v[4]) + 0.25 * sq(3.0 * v[2] - 4.0 * v[3] + v[4])};
}

constexpr std::array<double, 3> kLinear = {0.1, 0.6, 0.3};

std::array<double, 3> weights_oriented(const std::array<double, 5>& v, const WenoOptions& opt) {
  if (opt.linear_weights) return kLinear;
  const auto beta = smoothness(v);
  std::array<double, 3> alpha{};
  double sum = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double b = opt.epsilon + beta[k];
    alpha[k] = kLinear[k] / (opt.power == 2 ? b * b : std::pow(b, opt.power));
    sum += alpha[k];
  }
  for (double& a : alpha) a /= sum;
  return alpha;
}

}  // namespace

std::array<double, 3> weno5_weights(const Stencil5& s, Side side, const WenoOptions& opt) {
  auto w = weights_oriented(oriented(s, side), opt);
  if (side == Side::Left) return {w[2], w[1], w[0]};
  return w;
}

double weno5_face_value(const Stencil5& s, Side side, const WenoOptions& opt) {
  const auto v = oriented(s, side);
  const auto q = candidates(v);
  const auto w = weights_oriented(v, opt);
  return w[0] * q[0] + w[1] * q[1] + w[2] * q[2];
}

double weno5_face_derivative(const Stencil5& s, Side side) {
  const auto& v = s.values;
  if (side == Side::Right)
    return (v[1] - 15.0 * v[2] + 15.0 * v[3] - v[4]) / (12.0 * s.h);
  return (v[0] - 15.0 * v[1] + 15.0 * v[2] - v[3]) / (12.0 * s.h);
}

double center_point_value(const Stencil5& s) {
  const auto& v = s.values;
  return (9.0 * v[0] - 116.0 * v[1] + 2134.0 * v[2] - 116.0 * v[3] + 9.0 * v[4]) / 1920.0;
}

}  // namespace mppfv
