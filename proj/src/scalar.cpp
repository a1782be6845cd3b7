#include "cilab/scalar.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cilab/divergence.hpp"
#include "cilab/error.hpp"
#include "cilab/parallel.hpp"
#include "cilab/verify.hpp"

namespace cilab {

double total_variation(const ScalarField& f) { return gradient_measure(f).total_mass(); }

namespace {

struct Support {
  std::vector<double> centers;  // n per cell
  std::vector<double> weights;  // f * cell volume
};

Support support_of(const ScalarField& f) {
  Support s;
  const int n = f.grid.dim();
  const double vol = f.grid.cell_volume();
  std::vector<double> c(n);
  for (std::int64_t cell = 0; cell < f.grid.cell_count(); ++cell) {
    if (f.values[cell] == 0.0) continue;
    f.grid.center(cell, c);
    s.centers.insert(s.centers.end(), c.begin(), c.end());
    s.weights.push_back(f.values[cell] * vol);
  }
  return s;
}

double convolve_at(const Support& s, int n, std::span<const double> xi,
                   const std::function<double(std::span<const double>)>& w) {
  return sum_cells(static_cast<std::int64_t>(s.weights.size()), [&](std::int64_t k) {
    double x[kMaxDim];
    for (int i = 0; i < n; ++i) x[i] = s.centers[k * n + i] - xi[i];
    return s.weights[k] * w(std::span<const double>(x, n));
  });
}

}  // namespace

SupResult sup_convolution(const ScalarField& f, const std::function<double(std::span<const double>)>& w) {
  const Grid& g = f.grid;
  const int n = g.dim();
  const Support s = support_of(f);
  SupResult out;
  out.xi.assign(n, 0.0);
  if (s.weights.empty()) {
    for (int i = 0; i < n; ++i) out.xi[i] = g.origin()[i];
    return out;
  }
  const std::int64_t per_axis = n <= 2 ? 16 : 6;
  std::vector<std::int64_t> stride(n), steps(n);
  std::int64_t candidates = 1;
  for (int i = 0; i < n; ++i) {
    stride[i] = std::max<std::int64_t>(1, (g.counts()[i] + per_axis - 1) / per_axis);
    steps[i] = g.counts()[i] / stride[i] + 1;
    candidates *= steps[i];
  }
  auto eval = [&](std::span<const std::int64_t> k) {
    double xi[kMaxDim];
    for (int i = 0; i < n; ++i) xi[i] = g.origin()[i] + static_cast<double>(k[i]) * g.spacing()[i];
    ++out.evaluations;
    return convolve_at(s, n, std::span<const double>(xi, n), w);
  };

  std::vector<std::int64_t> best(n, 0), k(n);
  double best_val = -1.0;
  for (std::int64_t c = 0; c < candidates; ++c) {
    std::int64_t rest = c;
    for (int i = n - 1; i >= 0; --i) {
      k[i] = (rest % steps[i]) * stride[i];
      rest /= steps[i];
    }
    const double v = eval(k);
    if (v > best_val) {
      best_val = v;
      best = k;
    }
  }

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int sweep = 0; sweep < 2; ++sweep) {
    for (int i = 0; i < n; ++i) {
      std::int64_t lo = std::max<std::int64_t>(0, best[i] - stride[i]);
      std::int64_t hi = std::min<std::int64_t>(g.counts()[i], best[i] + stride[i]);
      k = best;
      auto at = [&](std::int64_t j) {
        k[i] = j;
        return eval(k);
      };
      while (hi - lo > 2) {
        const std::int64_t m1 = hi - static_cast<std::int64_t>(std::llround(inv_phi * (hi - lo)));
        const std::int64_t m2 = lo + static_cast<std::int64_t>(std::llround(inv_phi * (hi - lo)));
        const std::int64_t a = std::min(m1, m2), b = std::max(m1, m2);
        if (a == b) break;
        if (at(a) < at(b)) {
          lo = a;
        } else {
          hi = b;
        }
      }
      for (std::int64_t j = lo; j <= hi; ++j) {
        const double v = at(j);
        if (v > best_val) {
          best_val = v;
          best[i] = j;
        }
      }
    }
  }
  out.value = best_val;
  for (int i = 0; i < n; ++i) out.xi[i] = g.origin()[i] + static_cast<double>(best[i]) * g.spacing()[i];
  return out;
}

namespace {

bool has_negative(const ScalarField& f) {
  return std::any_of(f.values.begin(), f.values.end(), [](double v) { return v < 0.0; });
}

double inverse_r(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return 1.0 / std::sqrt(r2);
}

Report conv_report(const char* id, const ScalarField& f, const std::function<double(std::span<const double>)>& w,
                   double norm_factor) {
  const bool signed_input = has_negative(f);
  const ScalarField a = signed_input ? f.abs() : f;
  const SupResult sup = sup_convolution(a, w);
  const double tv = total_variation(a);
  Report r = Report::make(id, sup.value, tv * norm_factor);
  r.grid = f.grid.describe();
  r.add("xi", sup.xi);
  r.add("tv", tv);
  r.add("evaluations", std::to_string(sup.evaluations));
  if (signed_input) r.add("abs_substituted", "1");
  return r;
}

}  // namespace

Report conv_ratio(const ScalarField& f) { return conv_report("conv", f, inverse_r, 1.0); }

Report conv_kernel_bound(const ScalarField& f, const SphereProfile& g) {
  const int n = f.grid.dim();
  if (g.dim() != n) throw Error(ErrorKind::DimensionMismatch, "sphere profile dimension");
  const double norm = g.norm_nm1();
  Report r = conv_report(
      "conv-kernel", f,
      [&g, n](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const double r = std::sqrt(r2);
        double u[kMaxDim];
        for (int i = 0; i < n; ++i) u[i] = x[i] / r;
        return g(std::span<const double>(u, n)) * (1.0 / r);
      },
      norm);
  r.add("g_norm", norm);
  return r;
}

namespace {

// Product grid for functions of "all coordinates but one". `lead` axes are
// shared by every factor (time), then d axes y_0..y_{d-1}; factor j omits y_j.
struct ProductGrid {
  Grid grid;
  int lead = 0;
  int d = 0;

  ProductGrid(std::span<const ScalarField> fs, int lead_axes) : lead(lead_axes), d(static_cast<int>(fs.size())) {
    if (d < 2) throw Error(ErrorKind::DimensionMismatch, "need at least 2 factors");
    for (const auto& f : fs) {
      if (f.grid.dim() != lead + d - 1) {
        throw Error(ErrorKind::DimensionMismatch, "factor dimension must be " + std::to_string(lead + d - 1));
      }
    }
    const int total = lead + d;
    std::vector<double> origin(total), spacing(total);
    std::vector<std::int64_t> counts(total);
    std::vector<bool> set(total, false);
    auto take = [&](int axis, const Grid& g, int src) {
      if (!set[axis]) {
        origin[axis] = g.origin()[src];
        spacing[axis] = g.spacing()[src];
        counts[axis] = g.counts()[src];
        set[axis] = true;
      } else if (origin[axis] != g.origin()[src] || spacing[axis] != g.spacing()[src] ||
                 counts[axis] != g.counts()[src]) {
        throw Error(ErrorKind::GridMismatch, "factors disagree on axis " + std::to_string(axis));
      }
    };
    for (int j = 0; j < d; ++j) {
      for (int a = 0; a < total; ++a) {
        const int src = source_axis(j, a);
        if (src >= 0) take(a, fs[j].grid, src);
      }
    }
    grid = Grid(origin, spacing, counts);
  }

  // Axis of factor j holding product axis a, or -1 if factor j omits it.
  int source_axis(int j, int a) const {
    if (a < lead) return a;
    const int k = a - lead;
    if (k == j) return -1;
    return a - (k > j ? 1 : 0);
  }
};

double product_at(std::span<const ScalarField> fs, const ProductGrid& pg, std::span<const std::int64_t> idx) {
  double prod = 1.0;
  std::int64_t sub[kMaxDim];
  for (int j = 0; j < pg.d && prod != 0.0; ++j) {
    const Grid& g = fs[j].grid;
    for (int a = 0; a < pg.grid.dim(); ++a) {
      const int src = pg.source_axis(j, a);
      if (src >= 0) sub[src] = idx[a];
    }
    prod *= std::abs(fs[j].values[g.ravel(std::span<const std::int64_t>(sub, g.dim()))]);
  }
  return prod;
}

}  // namespace

Report gagliardo_classic(std::span<const ScalarField> fs) {
  const ProductGrid pg(fs, 0);
  const int d = pg.d;
  const double vol = pg.grid.cell_volume();
  std::vector<std::int64_t> idx(d);
  double lhs = 0.0;
  for (std::int64_t c = 0; c < pg.grid.cell_count(); ++c) {
    pg.grid.unravel(c, idx);
    lhs += product_at(fs, pg, idx) * vol;
  }
  double rhs = 1.0;
  for (const auto& f : fs) rhs *= f.lp_norm(d - 1);
  Report r = Report::make("gagliardo-classic", lhs, rhs);
  r.grid = pg.grid.describe();
  return r;
}

Report gagliardo_time(std::span<const ScalarField> fs, std::span<const double> xi) {
  const ProductGrid pg(fs, 1);
  const int d = pg.d;
  const int n = d + 1;
  std::vector<double> anchor(n, 0.0);
  if (!xi.empty()) {
    if (static_cast<int>(xi.size()) != n) throw Error(ErrorKind::DimensionMismatch, "kernel anchor");
    anchor.assign(xi.begin(), xi.end());
  }
  std::vector<double> omega(n, 0.0);
  omega[0] = 1.0;
  KernelSpec k = KernelSpec::schur(snap_singular_point(pg.grid, anchor), omega);
  const double vol = pg.grid.cell_volume();
  std::vector<std::int64_t> idx(n);
  std::vector<double> x(n);
  double lhs = 0.0;
  for (std::int64_t c = 0; c < pg.grid.cell_count(); ++c) {
    pg.grid.unravel(c, idx);
    const double p = product_at(fs, pg, idx);
    if (p == 0.0) continue;
    pg.grid.center(c, x);
    for (int i = 0; i < n; ++i) x[i] -= k.xi[i];
    lhs += kernel_weight(k, x) * p * vol;
  }
  double rhs = 1.0;
  for (const auto& f : fs) rhs *= f.lp_norm(d);
  Report r = Report::make("gagliardo-time", lhs, rhs);
  r.grid = pg.grid.describe();
  r.add("xi", k.xi);
  return r;
}

}  // namespace cilab
