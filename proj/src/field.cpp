#include "cilab/field.hpp"

#include <cmath>
#include <string>

#include "cilab/error.hpp"

namespace cilab {

TensorField::TensorField(Grid grid, int matrix_dim)
    : grid_(std::move(grid)), n_(matrix_dim), stride_(packed_size(matrix_dim)) {
  if (matrix_dim < 1 || matrix_dim > kMaxDim) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimension " + std::to_string(matrix_dim));
  }
  data_.assign(static_cast<std::size_t>(grid_.cell_count()) * stride_, 0.0);
}

TensorField TensorField::from_function(const Grid& grid, int matrix_dim,
                                       const std::function<SymMat(std::span<const double>)>& fn) {
  TensorField f(grid, matrix_dim);
  std::vector<double> c(grid.dim());
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    grid.center(cell, c);
    f.set(cell, fn(c));
  }
  return f;
}

SymMat TensorField::at(std::int64_t cell) const { return SymMat::from_packed(n_, packed(cell)); }

void TensorField::set(std::int64_t cell, const SymMat& m) {
  if (m.dim() != n_) throw Error(ErrorKind::DimensionMismatch, "cell value dimension");
  const auto src = m.packed();
  std::copy(src.begin(), src.end(), data_.begin() + static_cast<std::ptrdiff_t>(cell) * stride_);
  psd_ = false;
}

void TensorField::mark_psd(double tol) {
  for (std::int64_t cell = 0; cell < cell_count(); ++cell) {
    const auto p = packed(cell);
    bool zero = true;
    for (double v : p) zero = zero && v == 0.0;
    if (zero) continue;
    if (!is_psd(at(cell), tol)) throw Error(ErrorKind::NotPSDField, "cell " + std::to_string(cell));
  }
  psd_ = true;
}

TensorField& TensorField::operator+=(const TensorField& o) {
  if (!(grid_ == o.grid_) || n_ != o.n_) throw Error(ErrorKind::GridMismatch, "field sum");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  psd_ = psd_ && o.psd_;
  singular_.insert(singular_.end(), o.singular_.begin(), o.singular_.end());
  return *this;
}

TensorField& TensorField::operator*=(double s) {
  for (double& v : data_) v *= s;
  if (s < 0.0) psd_ = false;
  return *this;
}

ScalarField ScalarField::from_function(const Grid& grid, const std::function<double(std::span<const double>)>& fn) {
  ScalarField f(grid);
  std::vector<double> c(grid.dim());
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    grid.center(cell, c);
    f.values[cell] = fn(c);
  }
  return f;
}

TensorField ScalarField::times_identity() const {
  const int n = grid.dim();
  TensorField t(grid, n);
  auto& raw = t.raw();
  const int stride = packed_size(n);
  bool nonneg = true;
  for (std::int64_t cell = 0; cell < grid.cell_count(); ++cell) {
    const double v = values[cell];
    nonneg = nonneg && v >= 0.0;
    for (int i = 0; i < n; ++i) raw[cell * stride + packed_index(n, i, i)] = v;
  }
  if (nonneg) t.mark_psd(0.0);
  return t;
}

ScalarField ScalarField::abs() const {
  ScalarField a = *this;
  for (double& v : a.values) v = std::abs(v);
  return a;
}

double ScalarField::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_volume();
}

double ScalarField::lp_norm(double p) const {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), p);
  return std::pow(s * grid.cell_volume(), 1.0 / p);
}

}  // namespace cilab
