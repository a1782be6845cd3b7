#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cilab/grid.hpp"
#include "cilab/symmat.hpp"

namespace cilab {

/// A point where a field is singular (e.g. the centre of an extreme tensor).
/// The divergence operator lumps the discrete divergence of cells within
/// `resolve_radius` into one point mass there.
struct SingularPoint {
  std::vector<double> position;
  double resolve_radius = 0.0;
};

/// Cell-centred field of symmetric matrices over a grid, zero outside the box.
/// The matrix dimension normally equals the grid dimension; Sigma-type fields
/// (dimension n-1 over R^n) are also representable.
class TensorField {
 public:
  TensorField() = default;
  TensorField(Grid grid, int matrix_dim);

  static TensorField from_function(const Grid& grid, int matrix_dim,
                                   const std::function<SymMat(std::span<const double>)>& fn);

  const Grid& grid() const { return grid_; }
  int dim() const { return n_; }
  std::int64_t cell_count() const { return grid_.cell_count(); }

  SymMat at(std::int64_t cell) const;
  void set(std::int64_t cell, const SymMat& m);
  double entry(std::int64_t cell, int i, int j) const {
    return data_[static_cast<std::size_t>(cell) * stride_ + packed_index(n_, i, j)];
  }
  std::span<const double> packed(std::int64_t cell) const {
    return {data_.data() + static_cast<std::size_t>(cell) * stride_, static_cast<std::size_t>(stride_)};
  }
  const std::vector<double>& raw() const { return data_; }
  std::vector<double>& raw() {
    psd_ = false;
    return data_;
  }

  bool psd_flag() const { return psd_; }
  /// Checks every cell with is_psd(tol) and sets the flag; throws NotPSDField
  /// naming the first failing cell.
  void mark_psd(double tol = kDefaultPsdTol);

  const std::vector<SingularPoint>& singular_points() const { return singular_; }
  void add_singular_point(SingularPoint p) { singular_.push_back(std::move(p)); }

  /// Pointwise sum; singular points are merged, the PSD flag survives when
  /// both operands carry it.
  TensorField& operator+=(const TensorField& o);
  TensorField& operator*=(double s);

 private:
  Grid grid_;
  int n_ = 0;
  int stride_ = 0;
  std::vector<double> data_;
  bool psd_ = false;
  std::vector<SingularPoint> singular_;
};

/// Cell-centred real field over a grid, zero outside the box.
struct ScalarField {
  Grid grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(Grid g) : grid(std::move(g)), values(static_cast<std::size_t>(grid.cell_count()), 0.0) {}

  static ScalarField from_function(const Grid& grid, const std::function<double(std::span<const double>)>& fn);

  /// f * I_n, PSD when f >= 0.
  TensorField times_identity() const;
  ScalarField abs() const;
  double integral() const;
  /// (int |f|^p)^{1/p}
  double lp_norm(double p) const;
};

}  // namespace cilab
