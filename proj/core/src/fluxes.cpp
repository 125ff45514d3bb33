#include "mppfv/fluxes.hpp"

#include <algorithm>
#include <stdexcept>

namespace mppfv {

double low_order_convective_flux(double ui, double uj, const Face& face, const ProblemSpec& spec,
                                 double lambda_a, double t) {
  const Vec2 fi = spec.flux(ui, face.midpoint, t);
  const Vec2 fj = spec.flux(uj, face.midpoint, t);
  return 0.5 * (dot(face.normal, fi) + dot(face.normal, fj)) - 0.5 * lambda_a * (uj - ui);
}

double low_order_diffusive_flux(double ui, double uj, const Face& face, const ProblemSpec& spec) {
  const double c = spec.diffusion(0.5 * (ui + uj), face.midpoint);
  return c * (uj - ui) / face.distance;
}

SpatialOperator::SpatialOperator(const ProblemSpec& spec, const StructuredGrid& grid,
                                 WenoOptions weno)
    : spec_(&spec), grid_(&grid), weno_(weno) {
  if (spec.dim != grid.dim())
    throw std::invalid_argument("SpatialOperator: problem and grid dimensions differ");
}

ExtendedField SpatialOperator::extend(const CellField& u) const {
  return ghost_fill(u, std::span<const AxisBoundary>(spec_->boundary.data(), 2),
                    StructuredGrid::kGhostWidth);
}

Stencil5 SpatialOperator::stencil(const ExtendedField& u, const Face& face,
                                  bool right_cell) const {
  Stencil5 s;
  s.h = grid_->spacing(face.axis);
  const std::size_t shift = right_cell ? 1 : 0;
  const auto v = u.values();
  for (std::size_t k = 0; k < 5; ++k)
    s.values[k] = v[face.stencil_begin + (k + shift) * face.stencil_stride];
  return s;
}

std::vector<double> SpatialOperator::wave_speeds(const ExtendedField& u, double t) const {
  const auto& fs = faces();
  std::vector<double> lambda(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    FaceStates st;
    st.left = value(u, f.left_ext);
    st.right = value(u, f.right_ext);
    st.midpoint = f.midpoint;
    st.normal = f.normal;
    st.time = t;
    if (spec_->wave_speed_uses_reconstruction) {
      st.recon_left = weno5_face_value(stencil(u, f, false), Side::Right, weno_);
      st.recon_right = weno5_face_value(stencil(u, f, true), Side::Left, weno_);
    } else {
      st.recon_left = st.left;
      st.recon_right = st.right;
    }
    lambda[k] = std::max(spec_->wave_speed(st), kWaveSpeedFloor);
  }
  return lambda;
}

FaceFluxSet SpatialOperator::low_order_fluxes(const ExtendedField& u,
                                              std::span<const double> lambda_a,
                                              double t) const {
  const auto& fs = faces();
  FaceFluxSet g(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    const double ui = value(u, f.left_ext);
    const double uj = value(u, f.right_ext);
    g[k] = low_order_convective_flux(ui, uj, f, *spec_, lambda_a[k], t) -
           low_order_diffusive_flux(ui, uj, f, *spec_);
  }
  return g;
}

BarStateSet SpatialOperator::bar_states(const ExtendedField& u, std::span<const double> lambda_a,
                                        double t) const {
  const auto& fs = faces();
  const std::size_t n = fs.size();
  BarStateSet b;
  b.advective.resize(n);
  b.diffusive.resize(n);
  b.blended.resize(n);
  b.lambda.resize(n);
  b.lambda_a.assign(lambda_a.begin(), lambda_a.end());
  b.diffusion.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Face& f = fs[k];
    const double ui = value(u, f.left_ext);
    const double uj = value(u, f.right_ext);
    const double la = lambda_a[k];
    if (!(la > 0.0)) throw std::invalid_argument("bar_states: wave speed must be positive");
    const double fi = dot(f.normal, spec_->flux(ui, f.midpoint, t));
    const double fj = dot(f.normal, spec_->flux(uj, f.midpoint, t));
    const double mean = 0.5 * (ui + uj);
    const double c = spec_->diffusion(mean, f.midpoint);
    const double r = 2.0 * c / (la * f.distance);
    b.advective[k] = mean - (fj - fi) / (2.0 * la);
    b.diffusive[k] = mean;
    b.blended[k] = (b.advective[k] + r * mean) / (1.0 + r);
    b.lambda[k] = la * (1.0 + r);
    b.diffusion[k] = c;
  }
  return b;
}

FaceFluxSet SpatialOperator::high_order_fluxes(const ExtendedField& u, double t,
                                               std::vector<double>* lambda_a_out) const {
  const auto& fs = faces();
  FaceFluxSet g(fs.size());
  if (lambda_a_out) lambda_a_out->resize(fs.size());
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    const Stencil5 sl = stencil(u, f, false);
    const Stencil5 sr = stencil(u, f, true);
    const double pl = weno5_face_value(sl, Side::Right, weno_);
    const double pr = weno5_face_value(sr, Side::Left, weno_);
    const double dl = weno5_face_derivative(sl, Side::Right);
    const double dr = weno5_face_derivative(sr, Side::Left);

    FaceStates st;
    st.left = value(u, f.left_ext);
    st.right = value(u, f.right_ext);
    st.recon_left = pl;
    st.recon_right = pr;
    st.midpoint = f.midpoint;
    st.normal = f.normal;
    st.time = t;
    const double la = std::max(spec_->wave_speed(st), kWaveSpeedFloor);
    if (lambda_a_out) (*lambda_a_out)[k] = la;

    const double fl = dot(f.normal, spec_->flux(pl, f.midpoint, t));
    const double fr = dot(f.normal, spec_->flux(pr, f.midpoint, t));
    const double convective = 0.5 * (fl + fr) - 0.5 * la * (pr - pl);
    const double diffusive = 0.5 * (spec_->diffusion(pl, f.midpoint) * dl +
                                    spec_->diffusion(pr, f.midpoint) * dr);
    g[k] = convective - diffusive;
  }
  return g;
}

std::vector<double> SpatialOperator::cell_lambda_sums(const BarStateSet& bars) const {
  std::vector<double> a(grid_->cell_count(), 0.0);
  const auto& fs = faces();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    const double w = f.area * bars.lambda[k];
    if (f.left != Face::kGhost) a[f.left] += w;
    if (f.right != Face::kGhost) a[f.right] += w;
  }
  return a;
}

CellField SpatialOperator::low_order_rhs(const CellField& u, double t) const {
  const ExtendedField ext = extend(u);
  const auto lambda_a = wave_speeds(ext, t);
  const BarStateSet bars = bar_states(ext, lambda_a, t);
  CellField rhs(*grid_);
  const auto& fs = faces();
  const double inv_vol = 1.0 / grid_->volume();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    const double w = f.area * bars.lambda[k] * inv_vol;
    // The flux term n.f(u_i) cancels over a closed cell when f does not
    // depend on x; it is kept so both forms agree for x-dependent fluxes too.
    if (f.left != Face::kGhost) {
      const double ui = u[f.left];
      rhs[f.left] += w * (bars.blended[k] - ui) -
                     f.area * inv_vol * dot(f.normal, spec_->flux(ui, f.midpoint, t));
    }
    if (f.right != Face::kGhost) {
      const double uj = u[f.right];
      rhs[f.right] += w * (bars.blended[k] - uj) +
                      f.area * inv_vol * dot(f.normal, spec_->flux(uj, f.midpoint, t));
    }
  }
  return rhs;
}

void SpatialOperator::accumulate_divergence(const FaceFluxSet& g, double scale,
                                            std::span<double> out) const {
  const auto& fs = faces();
  const double s = scale / grid_->volume();
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    const double w = s * f.area * g[k];
    if (f.left != Face::kGhost) out[f.left] += w;
    if (f.right != Face::kGhost) out[f.right] -= w;
  }
}

CellField SpatialOperator::divergence(const FaceFluxSet& g) const {
  CellField out(*grid_);
  accumulate_divergence(g, 1.0, out.values());
  return out;
}

double SpatialOperator::boundary_outflow(const FaceFluxSet& g) const {
  const auto& fs = faces();
  double total = 0.0;
  for (std::size_t k = 0; k < fs.size(); ++k) {
    const Face& f = fs[k];
    if (f.right == Face::kGhost) total += f.area * g[k];
    if (f.left == Face::kGhost) total -= f.area * g[k];
  }
  return total;
}

}  // namespace mppfv
