#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/grid.hpp"

namespace cilab {

/// Discrete vector measure Div A (row i = sum_j d_j a_ij) of a zero-extended
/// cell field, split into three parts:
///   interior: centred differences times cell volume, one vector per cell
///             (one-sided on the outermost cells, zero along an axis of one cell);
///   sheets:   the jump to zero across the box faces, +a_ij on low faces and
///             -a_ij on high faces times the face area;
///   atoms:    interior vectors of the cells within the resolve radius of a
///             registered singular point, summed into one point mass there.
/// Each part's mass is the sum of Euclidean norms of its vectors.
class DivMeasure {
 public:
  struct Sheet {
    std::int64_t cell;
    int axis;
    int side;  // 0 low face, 1 high face
  };
  struct Atom {
    std::vector<double> position;
    std::vector<double> value;
    std::int64_t cells = 0;
  };

  DivMeasure(Grid grid, int rows);

  const Grid& grid() const { return grid_; }
  int rows() const { return rows_; }

  std::span<const double> interior(std::int64_t cell) const {
    return {interior_.data() + cell * rows_, static_cast<std::size_t>(rows_)};
  }
  std::span<double> interior(std::int64_t cell) {
    return {interior_.data() + cell * rows_, static_cast<std::size_t>(rows_)};
  }
  const std::vector<Sheet>& sheets() const { return sheets_; }
  std::span<const double> sheet_value(std::size_t k) const {
    return {sheet_values_.data() + k * rows_, static_cast<std::size_t>(rows_)};
  }
  const std::vector<Atom>& atoms() const { return atoms_; }

  double interior_mass() const;
  double sheet_mass() const;
  double atom_mass() const;
  /// ||Div A||_M
  double total_mass() const { return interior_mass() + sheet_mass() + atom_mass(); }
  /// ||(Div A)_i||_M
  double row_mass(int i) const;
  /// ||e . Div A||_M = ||div(A e)||_M for symmetric A.
  double directional_mass(std::span<const double> e) const;

 private:
  template <class Fn>
  double accumulate(Fn fn) const;

  friend DivMeasure divergence(const TensorField& a);
  friend DivMeasure gradient_measure(const ScalarField& f);
  template <class Entry>
  friend DivMeasure build_divergence(const Grid& g, int rows, Entry entry, std::span<const SingularPoint> sps);

  Grid grid_;
  int rows_;
  std::vector<double> interior_;
  std::vector<Sheet> sheets_;
  std::vector<double> sheet_values_;
  std::vector<Atom> atoms_;
};

/// Div A for a field whose matrix dimension equals the grid dimension.
DivMeasure divergence(const TensorField& a);
/// Gradient measure of f (= Div(f I_n)); its mass is TV(f).
DivMeasure gradient_measure(const ScalarField& f);

}  // namespace cilab
