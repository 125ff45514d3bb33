#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mppfv {

using Vec2 = std::array<double, 2>;

inline double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

enum class BoundaryKind { Periodic, Dirichlet };

/// Boundary data for one axis. Dirichlet axes carry the value imposed on the
/// lower and upper side; the value fills every ghost layer on that side.
struct AxisBoundary {
  BoundaryKind kind = BoundaryKind::Periodic;
  std::optional<double> lower;
  std::optional<double> upper;
};

/// One geometric face, oriented from `left` to `right` along `axis`.
///
/// `left`/`right` are interior cell indices, or kGhost when the face touches a
/// Dirichlet ghost slot. The `*_ext` indices address the ghost-extended array
/// of width StructuredGrid::kGhostWidth and are always valid.
struct Face {
  static constexpr int kGhost = -1;

  int left = kGhost;
  int right = kGhost;
  std::size_t left_ext = 0;
  std::size_t right_ext = 0;
  int axis = 0;
  double area = 1.0;
  double distance = 1.0;  // |x_right - x_left|
  Vec2 normal{};          // unit normal from left to right
  Vec2 midpoint{};
  Vec2 left_center{};
  Vec2 right_center{};
  // Extended index of the cell two to the left of `left` along `axis`; the six
  // values stencil_begin + k * stencil_stride, k = 0..5, cover both WENO5
  // stencils of the face.
  std::size_t stencil_begin = 0;
  std::size_t stencil_stride = 1;

  bool touches_boundary() const { return left == kGhost || right == kGhost; }
};

/// Uniform 1D or 2D cell lattice. Cells are numbered row-major with x
/// fastest; faces are listed x-faces first (row by row), then y-faces.
class StructuredGrid {
 public:
  static constexpr int kGhostWidth = 3;

  StructuredGrid(int cells, double lo, double hi, BoundaryKind boundary);
  StructuredGrid(std::array<int, 2> cells, Vec2 lo, Vec2 hi,
                 std::array<BoundaryKind, 2> boundary);

  int dim() const { return dim_; }
  int cells(int axis) const { return cells_[axis]; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(cells_[0]) * static_cast<std::size_t>(cells_[1]);
  }
  double spacing(int axis) const { return spacing_[axis]; }
  Vec2 lo() const { return lo_; }
  Vec2 hi() const { return hi_; }
  BoundaryKind boundary(int axis) const { return boundary_[axis]; }

  /// |K_i|: dx in 1D, dx*dy in 2D.
  double volume() const { return volume_; }
  /// |S_ij| of a face normal to `axis`: 1 in 1D, the transverse spacing in 2D.
  double face_area(int axis) const;

  std::size_t index(int ix, int iy = 0) const;
  std::array<int, 2> coordinates(std::size_t cell) const;
  Vec2 cell_center(std::size_t cell) const;
  Vec2 cell_center(int ix, int iy) const;

  const std::vector<Face>& faces() const { return faces_; }

  // Ghost-extended layout (width kGhostWidth along every active axis).
  int extended_cells(int axis) const;
  std::size_t extended_size() const;
  std::size_t extended_index(int ix, int iy = 0) const;
  std::size_t extended_stride(int axis) const { return axis == 0 ? 1 : extended_cells(0); }
  std::size_t to_extended(std::size_t cell) const;

 private:
  void build_faces();

  int dim_;
  std::array<int, 2> cells_;
  Vec2 lo_;
  Vec2 hi_;
  Vec2 spacing_;
  std::array<BoundaryKind, 2> boundary_;
  double volume_;
  std::vector<Face> faces_;
};

/// One scalar cell average per cell.
class CellField {
 public:
  explicit CellField(const StructuredGrid& grid, double value = 0.0);
  CellField(const StructuredGrid& grid, std::vector<double> values);

  const StructuredGrid& grid() const { return *grid_; }
  std::size_t size() const { return values_.size(); }

  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const std::vector<double>& data() const { return values_; }

 private:
  const StructuredGrid* grid_;
  std::vector<double> values_;
};

/// A cell field padded with ghost layers. Indices run from -width to
/// cells + width - 1 along every active axis.
class ExtendedField {
 public:
  ExtendedField(const StructuredGrid& grid, int width);

  const StructuredGrid& grid() const { return *grid_; }
  int width() const { return width_; }
  int extent(int axis) const { return extent_[axis]; }

  std::size_t offset(int ix, int iy = 0) const {
    const int wy = grid_->dim() == 2 ? width_ : 0;
    return static_cast<std::size_t>(ix + width_) +
           static_cast<std::size_t>(iy + wy) * static_cast<std::size_t>(extent_[0]);
  }
  double at(int ix, int iy = 0) const { return values_[offset(ix, iy)]; }
  double& at(int ix, int iy = 0) { return values_[offset(ix, iy)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Copies the interior back out; the inverse of ghost_fill on interior data.
  CellField interior() const;

 private:
  const StructuredGrid* grid_;
  int width_;
  std::array<int, 2> extent_;
  std::vector<double> values_;
};

/// Pads `field` with `width` ghost layers per side. Periodic axes copy wrapped
/// interior values; Dirichlet axes fill every ghost layer with the boundary
/// value. Throws std::invalid_argument if a Dirichlet value is missing.
ExtendedField ghost_fill(const CellField& field, std::span<const AxisBoundary> boundary,
                         int width = StructuredGrid::kGhostWidth);

}  // namespace mppfv
