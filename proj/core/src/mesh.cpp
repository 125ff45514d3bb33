#include "mppfv/mesh.hpp"

#include <stdexcept>
#include <string>

namespace mppfv {

namespace {

int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

StructuredGrid::StructuredGrid(int cells, double lo, double hi, BoundaryKind boundary)
    : dim_(1),
      cells_{cells, 1},
      lo_{lo, 0.0},
      hi_{hi, 1.0},
      spacing_{0.0, 1.0},
      boundary_{boundary, BoundaryKind::Periodic} {
  if (cells <= 0) throw std::invalid_argument("StructuredGrid: cell count must be positive");
  if (!(hi > lo)) throw std::invalid_argument("StructuredGrid: empty domain");
  spacing_[0] = (hi - lo) / cells;
  volume_ = spacing_[0];
  build_faces();
}

StructuredGrid::StructuredGrid(std::array<int, 2> cells, Vec2 lo, Vec2 hi,
                               std::array<BoundaryKind, 2> boundary)
    : dim_(2), cells_(cells), lo_(lo), hi_(hi), boundary_(boundary) {
  for (int k = 0; k < 2; ++k) {
    if (cells[k] <= 0) throw std::invalid_argument("StructuredGrid: cell count must be positive");
    if (!(hi[k] > lo[k])) throw std::invalid_argument("StructuredGrid: empty domain");
    spacing_[k] = (hi[k] - lo[k]) / cells[k];
  }
  volume_ = spacing_[0] * spacing_[1];
  build_faces();
}

double StructuredGrid::face_area(int axis) const {
  if (dim_ == 1) return 1.0;
  return spacing_[1 - axis];
}

std::size_t StructuredGrid::index(int ix, int iy) const {
  if (ix < 0 || ix >= cells_[0] || iy < 0 || iy >= cells_[1])
    throw std::out_of_range("StructuredGrid: cell coordinates out of range");
  return static_cast<std::size_t>(ix) + static_cast<std::size_t>(iy) * cells_[0];
}

std::array<int, 2> StructuredGrid::coordinates(std::size_t cell) const {
  if (cell >= cell_count()) throw std::out_of_range("StructuredGrid: cell index out of range");
  return {static_cast<int>(cell % cells_[0]), static_cast<int>(cell / cells_[0])};
}

Vec2 StructuredGrid::cell_center(std::size_t cell) const {
  const auto [ix, iy] = coordinates(cell);
  return cell_center(ix, iy);
}

Vec2 StructuredGrid::cell_center(int ix, int iy) const {
  Vec2 x{lo_[0] + (ix + 0.5) * spacing_[0], 0.0};
  if (dim_ == 2) x[1] = lo_[1] + (iy + 0.5) * spacing_[1];
  return x;
}

int StructuredGrid::extended_cells(int axis) const {
  if (axis == 1 && dim_ == 1) return 1;
  return cells_[axis] + 2 * kGhostWidth;
}

std::size_t StructuredGrid::extended_size() const {
  return static_cast<std::size_t>(extended_cells(0)) * extended_cells(1);
}

std::size_t StructuredGrid::extended_index(int ix, int iy) const {
  const int wy = dim_ == 2 ? kGhostWidth : 0;
  return static_cast<std::size_t>(ix + kGhostWidth) +
         static_cast<std::size_t>(iy + wy) * extended_cells(0);
}

std::size_t StructuredGrid::to_extended(std::size_t cell) const {
  const auto [ix, iy] = coordinates(cell);
  return extended_index(ix, iy);
}

void StructuredGrid::build_faces() {
  faces_.clear();
  for (int axis = 0; axis < dim_; ++axis) {
    const int n = cells_[axis];
    const int m = dim_ == 2 ? cells_[1 - axis] : 1;
    const bool periodic = boundary_[axis] == BoundaryKind::Periodic;
    // Face k sits at lo + k * h between cells k - 1 and k along `axis`.
    const int first = 0;
    const int last = periodic ? n - 1 : n;
    for (int t = 0; t < m; ++t) {
      for (int k = first; k <= last; ++k) {
        auto coords = [&](int along) {
          return axis == 0 ? std::array<int, 2>{along, t} : std::array<int, 2>{t, along};
        };
        Face f;
        f.axis = axis;
        f.area = face_area(axis);
        f.distance = spacing_[axis];
        f.normal = axis == 0 ? Vec2{1.0, 0.0} : Vec2{0.0, 1.0};

        const int left_along = k - 1;
        const int right_along = k;
        const auto lc = coords(left_along);
        const auto rc = coords(right_along);
        f.left_center = cell_center(lc[0], lc[1]);
        f.right_center = cell_center(rc[0], rc[1]);
        f.midpoint = f.left_center;
        f.midpoint[axis] = lo_[axis] + k * spacing_[axis];

        if (periodic) {
          const auto lw = coords(wrap(left_along, n));
          f.left = static_cast<int>(index(lw[0], lw[1]));
          f.right = static_cast<int>(index(rc[0], rc[1]));
        } else {
          f.left = left_along < 0 ? Face::kGhost : static_cast<int>(index(lc[0], lc[1]));
          f.right = right_along >= n ? Face::kGhost : static_cast<int>(index(rc[0], rc[1]));
        }
        f.left_ext = extended_index(lc[0], lc[1]);
        f.right_ext = extended_index(rc[0], rc[1]);
        const auto sc = coords(left_along - 2);
        f.stencil_begin = extended_index(sc[0], sc[1]);
        f.stencil_stride = extended_stride(axis);
        faces_.push_back(f);
      }
    }
  }
}

CellField::CellField(const StructuredGrid& grid, double value)
    : grid_(&grid), values_(grid.cell_count(), value) {}

CellField::CellField(const StructuredGrid& grid, std::vector<double> values)
    : grid_(&grid), values_(std::move(values)) {
  if (values_.size() != grid.cell_count())
    throw std::invalid_argument("CellField: value count " + std::to_string(values_.size()) +
                                " does not match cell count " +
                                std::to_string(grid.cell_count()));
}

ExtendedField::ExtendedField(const StructuredGrid& grid, int width)
    : grid_(&grid), width_(width) {
  if (width < 1) throw std::invalid_argument("ghost width must be at least 1");
  extent_[0] = grid.cells(0) + 2 * width;
  extent_[1] = grid.dim() == 2 ? grid.cells(1) + 2 * width : 1;
  values_.assign(static_cast<std::size_t>(extent_[0]) * extent_[1], 0.0);
}

CellField ExtendedField::interior() const {
  CellField out(*grid_);
  for (int iy = 0; iy < grid_->cells(1); ++iy)
    for (int ix = 0; ix < grid_->cells(0); ++ix) out[grid_->index(ix, iy)] = at(ix, iy);
  return out;
}

ExtendedField ghost_fill(const CellField& field, std::span<const AxisBoundary> boundary,
                         int width) {
  const StructuredGrid& grid = field.grid();
  if (boundary.size() < static_cast<std::size_t>(grid.dim()))
    throw std::invalid_argument("ghost_fill: missing boundary data");
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const AxisBoundary& b = boundary[axis];
    if (b.kind != grid.boundary(axis))
      throw std::invalid_argument("ghost_fill: boundary kind does not match the grid");
    if (b.kind == BoundaryKind::Dirichlet && (!b.lower || !b.upper))
      throw std::invalid_argument("ghost_fill: Dirichlet axis " + std::to_string(axis) +
                                  " has no boundary value");
  }

  ExtendedField ext(grid, width);
  const int nx = grid.cells(0);
  const int ny = grid.cells(1);
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) ext.at(ix, iy) = field[grid.index(ix, iy)];

  auto fill_axis = [&](int axis, int t_lo, int t_hi) {
    const int n = grid.cells(axis);
    const AxisBoundary& b = boundary[axis];
    for (int t = t_lo; t < t_hi; ++t) {
      for (int g = 1; g <= width; ++g) {
        const int below = -g;
        const int above = n - 1 + g;
        double vb, va;
        if (b.kind == BoundaryKind::Periodic) {
          vb = axis == 0 ? ext.at(wrap(below, n), t) : ext.at(t, wrap(below, n));
          va = axis == 0 ? ext.at(wrap(above, n), t) : ext.at(t, wrap(above, n));
        } else {
          vb = *b.lower;
          va = *b.upper;
        }
        if (axis == 0) {
          ext.at(below, t) = vb;
          ext.at(above, t) = va;
        } else {
          ext.at(t, below) = vb;
          ext.at(t, above) = va;
        }
      }
    }
  };

  fill_axis(0, 0, ny);
  // The y pass runs over the x-extended rows so corners are filled as well.
  if (grid.dim() == 2) fill_axis(1, -width, nx + width);
  return ext;
}

}  // namespace mppfv
