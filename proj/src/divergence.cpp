#include "cilab/divergence.hpp"

#include <cmath>

#include "cilab/error.hpp"
#include "cilab/parallel.hpp"

namespace cilab {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

DivMeasure::DivMeasure(Grid grid, int rows)
    : grid_(std::move(grid)), rows_(rows), interior_(static_cast<std::size_t>(grid_.cell_count()) * rows, 0.0) {}

template <class Fn>
double DivMeasure::accumulate(Fn fn) const {
  double s = sum_cells(grid_.cell_count(), [&](std::int64_t c) { return fn(interior(c)); });
  for (std::size_t k = 0; k < sheets_.size(); ++k) s += fn(sheet_value(k));
  for (const auto& a : atoms_) s += fn(std::span<const double>(a.value));
  return s;
}

double DivMeasure::interior_mass() const {
  return sum_cells(grid_.cell_count(), [&](std::int64_t c) { return norm(interior(c)); });
}

double DivMeasure::sheet_mass() const {
  double s = 0.0;
  for (std::size_t k = 0; k < sheets_.size(); ++k) s += norm(sheet_value(k));
  return s;
}

double DivMeasure::atom_mass() const {
  double s = 0.0;
  for (const auto& a : atoms_) s += norm(a.value);
  return s;
}

double DivMeasure::row_mass(int i) const {
  return accumulate([i](std::span<const double> v) { return std::abs(v[i]); });
}

double DivMeasure::directional_mass(std::span<const double> e) const {
  if (static_cast<int>(e.size()) != rows_) throw Error(ErrorKind::DimensionMismatch, "direction length");
  return accumulate([e](std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += e[i] * v[i];
    return std::abs(s);
  });
}

template <class Entry>
DivMeasure build_divergence(const Grid& g, int rows, Entry entry, std::span<const SingularPoint> sps) {
  const int n = g.dim();
  DivMeasure out(g, rows);
  const double vol = g.cell_volume();
  const std::int64_t cells = g.cell_count();
  std::vector<std::int64_t> idx(n);
  for (std::int64_t c = 0; c < cells; ++c) {
    g.unravel(c, idx);
    auto v = out.interior(c);
    for (int j = 0; j < n; ++j) {
      const std::int64_t nj = g.counts()[j];
      if (nj == 1) continue;
      const std::int64_t st = g.stride(j);
      std::int64_t lo = c, hi = c;
      double span = 2.0 * g.spacing()[j];
      if (idx[j] == 0) {
        hi = c + st;
        span = g.spacing()[j];
      } else if (idx[j] == nj - 1) {
        lo = c - st;
        span = g.spacing()[j];
      } else {
        lo = c - st;
        hi = c + st;
      }
      for (int i = 0; i < rows; ++i) v[i] += (entry(hi, i, j) - entry(lo, i, j)) / span * vol;
    }
  }

  for (int j = 0; j < n; ++j) {
    const double area = g.face_area(j);
    const std::int64_t nj = g.counts()[j];
    for (std::int64_t c = 0; c < cells; ++c) {
      const std::int64_t k = (c / g.stride(j)) % nj;
      for (int side = 0; side < 2; ++side) {
        if (k != (side == 0 ? 0 : nj - 1)) continue;
        const double sign = side == 0 ? 1.0 : -1.0;
        bool nonzero = false;
        for (int i = 0; i < rows; ++i) {
          const double val = sign * entry(c, i, j) * area;
          out.sheet_values_.push_back(val);
          nonzero = nonzero || val != 0.0;
        }
        if (nonzero) {
          out.sheets_.push_back({c, j, side});
        } else {
          out.sheet_values_.resize(out.sheet_values_.size() - rows);
        }
      }
    }
  }

  if (!sps.empty()) {
    std::vector<char> taken(static_cast<std::size_t>(cells), 0);
    std::vector<double> x(n);
    for (const auto& sp : sps) {
      DivMeasure::Atom atom{sp.position, std::vector<double>(rows, 0.0), 0};
      const double r2 = sp.resolve_radius * sp.resolve_radius;
      for (std::int64_t c = 0; c < cells; ++c) {
        if (taken[c]) continue;
        g.center(c, x);
        double d2 = 0.0;
        for (int k = 0; k < n; ++k) d2 += (x[k] - sp.position[k]) * (x[k] - sp.position[k]);
        if (d2 > r2) continue;
        taken[c] = 1;
        auto v = out.interior(c);
        for (int i = 0; i < rows; ++i) {
          atom.value[i] += v[i];
          v[i] = 0.0;
        }
        ++atom.cells;
      }
      out.atoms_.push_back(std::move(atom));
    }
  }
  return out;
}

DivMeasure divergence(const TensorField& a) {
  if (a.dim() != a.grid().dim()) {
    throw Error(ErrorKind::DimensionMismatch, "divergence needs matrix dimension = grid dimension");
  }
  return build_divergence(
      a.grid(), a.dim(), [&a](std::int64_t c, int i, int j) { return a.entry(c, i, j); }, a.singular_points());
}

DivMeasure gradient_measure(const ScalarField& f) {
  const auto& v = f.values;
  return build_divergence(
      f.grid, f.grid.dim(), [&v](std::int64_t c, int i, int j) { return i == j ? v[c] : 0.0; },
      std::span<const SingularPoint>{});
}

}  // namespace cilab
