#include "cilab/grid.hpp"

#include <atomic>
#include <cmath>
#include <sstream>

#include "cilab/error.hpp"
#include "cilab/format.hpp"

namespace cilab {

namespace {
std::atomic<std::int64_t> g_cell_budget{std::int64_t{1} << 27};
}

std::int64_t Grid::cell_budget() { return g_cell_budget.load(); }
void Grid::set_cell_budget(std::int64_t budget) { g_cell_budget.store(budget); }

Grid::Grid(std::vector<double> origin, std::vector<double> spacing, std::vector<std::int64_t> counts)
    : origin_(std::move(origin)), spacing_(std::move(spacing)), counts_(std::move(counts)) {
  const std::size_t n = counts_.size();
  if (n < 1 || n > 6 || origin_.size() != n || spacing_.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "grid origin/spacing/counts lengths disagree");
  }
  strides_.assign(n, 1);
  cell_count_ = 1;
  for (std::size_t k = n; k-- > 0;) {
    if (!(spacing_[k] > 0.0) || !std::isfinite(spacing_[k])) {
      throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
    }
    if (!std::isfinite(origin_[k])) throw Error(ErrorKind::InvalidArgument, "grid origin not finite");
    if (counts_[k] < 1) throw Error(ErrorKind::InvalidArgument, "grid counts must be >= 1");
    strides_[k] = cell_count_;
    if (cell_count_ > cell_budget() / counts_[k]) {
      throw Error(ErrorKind::GridTooLarge, "cell count exceeds budget " + std::to_string(cell_budget()));
    }
    cell_count_ *= counts_[k];
  }
}

Grid Grid::box(std::span<const double> lo, std::span<const double> hi, std::span<const std::int64_t> counts) {
  if (lo.size() != hi.size() || lo.size() != counts.size()) {
    throw Error(ErrorKind::DimensionMismatch, "box bounds and counts lengths disagree");
  }
  std::vector<double> h(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) h[k] = (hi[k] - lo[k]) / static_cast<double>(counts[k]);
  return Grid({lo.begin(), lo.end()}, std::move(h), {counts.begin(), counts.end()});
}

Grid Grid::cube(int dim, double half_width, std::int64_t cells) {
  std::vector<double> lo(dim, -half_width), hi(dim, half_width);
  std::vector<std::int64_t> c(dim, cells);
  return box(lo, hi, c);
}

double Grid::cell_volume() const {
  double v = 1.0;
  for (double h : spacing_) v *= h;
  return v;
}

double Grid::face_area(int axis) const {
  double a = 1.0;
  for (int k = 0; k < dim(); ++k) {
    if (k != axis) a *= spacing_[k];
  }
  return a;
}

void Grid::unravel(std::int64_t cell, std::span<std::int64_t> idx) const {
  for (int k = 0; k < dim(); ++k) {
    idx[k] = cell / strides_[k];
    cell -= idx[k] * strides_[k];
  }
}

std::int64_t Grid::ravel(std::span<const std::int64_t> idx) const {
  std::int64_t c = 0;
  for (int k = 0; k < dim(); ++k) c += idx[k] * strides_[k];
  return c;
}

void Grid::center(std::int64_t cell, std::span<double> out) const {
  for (int k = 0; k < dim(); ++k) {
    const std::int64_t i = cell / strides_[k];
    cell -= i * strides_[k];
    out[k] = origin_[k] + (static_cast<double>(i) + 0.5) * spacing_[k];
  }
}

std::vector<double> Grid::center(std::int64_t cell) const {
  std::vector<double> c(dim());
  center(cell, c);
  return c;
}

std::vector<double> Grid::snap_to_dual(std::span<const double> p) const {
  std::vector<double> s(dim());
  for (int k = 0; k < dim(); ++k) {
    s[k] = origin_[k] + std::round((p[k] - origin_[k]) / spacing_[k]) * spacing_[k];
  }
  return s;
}

bool Grid::on_node(std::span<const double> p) const {
  for (int k = 0; k < dim(); ++k) {
    const double u = (p[k] - origin_[k]) / spacing_[k] - 0.5;
    if (std::abs(u - std::round(u)) > 1e-9) return false;
  }
  return true;
}

std::string Grid::describe() const {
  std::ostringstream os;
  os << "n=" << dim() << " counts=";
  for (int k = 0; k < dim(); ++k) os << (k ? "x" : "") << counts_[k];
  os << " origin=" << join_doubles(origin_, ":") << " spacing=" << join_doubles(spacing_, ":");
  return os.str();
}

}  // namespace cilab
