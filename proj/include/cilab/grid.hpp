#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cilab {

/// Structured cell-centred grid over the box [origin, origin + counts*spacing].
/// Cells are numbered row-major (last axis fastest), which is also the DBV1
/// payload order.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> origin, std::vector<double> spacing, std::vector<std::int64_t> counts);

  /// [lo, hi] split into `counts` cells per axis.
  static Grid box(std::span<const double> lo, std::span<const double> hi, std::span<const std::int64_t> counts);
  /// Cube [-half_width, half_width]^dim with `cells` cells per axis.
  static Grid cube(int dim, double half_width, std::int64_t cells);

  int dim() const { return static_cast<int>(counts_.size()); }
  const std::vector<double>& origin() const { return origin_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  std::int64_t cell_count() const { return cell_count_; }
  double cell_volume() const;
  /// Area of a face normal to `axis`.
  double face_area(int axis) const;
  std::int64_t stride(int axis) const { return strides_[axis]; }
  double upper(int axis) const { return origin_[axis] + spacing_[axis] * static_cast<double>(counts_[axis]); }

  void unravel(std::int64_t cell, std::span<std::int64_t> idx) const;
  std::int64_t ravel(std::span<const std::int64_t> idx) const;
  void center(std::int64_t cell, std::span<double> out) const;
  std::vector<double> center(std::int64_t cell) const;

  /// Nearest cell corner (a node of the dual lattice) to `p`, on the infinite
  /// lattice extending the grid.
  std::vector<double> snap_to_dual(std::span<const double> p) const;
  /// True when `p` sits on a cell centre (within 1e-9 cells on every axis).
  bool on_node(std::span<const double> p) const;

  /// Compact description used in Report grid metadata.
  std::string describe() const;

  friend bool operator==(const Grid& a, const Grid& b) {
    return a.origin_ == b.origin_ && a.spacing_ == b.spacing_ && a.counts_ == b.counts_;
  }

  /// Upper bound on cell_count() enforced by the constructor.
  static std::int64_t cell_budget();
  static void set_cell_budget(std::int64_t budget);

 private:
  std::vector<double> origin_;
  std::vector<double> spacing_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> strides_;
  std::int64_t cell_count_ = 0;
};

}  // namespace cilab
