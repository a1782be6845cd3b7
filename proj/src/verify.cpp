#include "cilab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "cilab/error.hpp"
#include "cilab/mixed_det.hpp"
#include "cilab/parallel.hpp"

namespace cilab {

namespace {

void require_psd(const TensorField& a, const char* what) {
  if (!a.psd_flag()) throw Error(ErrorKind::NotPSDField, std::string(what) + ": field is not marked PSD");
}

void require_square(const TensorField& a) {
  if (a.dim() != a.grid().dim() || a.dim() < 2) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimension must equal grid dimension >= 2");
  }
}

struct Root {
  double value;
  bool clamped;
};

// d^{1/(n-1)}, clamping negative d to 0 and flagging clamps beyond rounding.
Root det_root(double d, double scale, int n) {
  if (d >= 0.0) return {std::pow(d, 1.0 / (n - 1)), false};
  return {0.0, d < -1e-12 * std::pow(scale, n)};
}

void describe_mass(Report& r, const DivMeasure& m) {
  r.add("div_mass", m.total_mass());
  r.add("interior", m.interior_mass());
  r.add("sheets", m.sheet_mass());
  r.add("atoms", m.atom_mass());
}

}  // namespace

DetRoot integral_det_root(const TensorField& a) {
  require_psd(a, "integral_det_root");
  require_square(a);
  const int n = a.dim();
  const double vol = a.grid().cell_volume();
  struct Acc {
    double v = 0.0;
    std::int64_t k = 0;
  };
  const Acc acc = reduce_cells(
      a.cell_count(), Acc{},
      [&](std::int64_t c) {
        const SymMat m = a.at(c);
        const Root r = det_root(det(m), m.frobenius_norm(), n);
        return Acc{r.value * vol, r.clamped ? 1 : 0};
      },
      [](Acc x, Acc y) { return Acc{x.v + y.v, x.k + y.k}; });
  return {acc.v, acc.k};
}

Report verify_fund(const TensorField& a) {
  const DetRoot lhs = integral_det_root(a);
  const DivMeasure div = divergence(a);
  const int n = a.dim();
  const double mass = div.total_mass();
  if (mass == 0.0 && lhs.value > 0.0) {
    throw Error(ErrorKind::ZeroDivMass, "positive det integral with zero divergence mass");
  }
  Report r = Report::make("fund", lhs.value, std::pow(mass, n / (n - 1.0)));
  r.grid = a.grid().describe();
  describe_mass(r, div);
  if (lhs.clamped > 0) r.downgrade(Status::clamped(lhs.clamped));
  return r;
}

Report verify_prod(const TensorField& a) {
  const DetRoot lhs = integral_det_root(a);
  const DivMeasure div = divergence(a);
  const int n = a.dim();
  std::vector<double> rows(n), mu(n);
  double prod = 1.0;
  for (int i = 0; i < n; ++i) {
    rows[i] = div.row_mass(i);
    if (!(rows[i] > 0.0)) throw Error(ErrorKind::ZeroRowMass, "row " + std::to_string(i));
    mu[i] = 1.0 / rows[i];
    prod *= rows[i];
  }
  const double rhs = std::pow(prod, 1.0 / (n - 1));
  Report r = Report::make("prod", lhs.value, rhs);
  r.grid = a.grid().describe();
  r.add("row_mass", rows);
  r.add("mu", mu);
  const double fund_rhs = std::pow(div.total_mass(), n / (n - 1.0));
  r.add("fund_rhs", fund_rhs);
  // Each row mass is at most the Euclidean mass, so the product form never
  // exceeds the single-mass form.
  r.add("prod_le_fund", rhs <= fund_rhs * (1.0 + 1e-12) ? "1" : "0");
  const auto [lo, hi] = std::minmax_element(rows.begin(), rows.end());
  if (*hi - *lo <= 1e-9 * *hi) {
    // Equal rows: |v| <= sum_i |v_i| gives the reverse comparison up to n^{n/(n-1)}.
    const double bound = std::pow(n, n / (n - 1.0)) * rhs;
    r.add("fund_le_scaled_prod", fund_rhs <= bound * (1.0 + 1e-12) ? "1" : "0");
  }
  if (lhs.clamped > 0) r.downgrade(Status::clamped(lhs.clamped));
  return r;
}

DirectionalAverage log_avg_direction(const TensorField& a, int samples, std::uint64_t seed) {
  require_psd(a, "log_avg_direction");
  require_square(a);
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  const int n = a.dim();
  const DivMeasure div = divergence(a);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  DirectionalAverage out;
  double sum = 0.0, sum2 = 0.0;
  std::vector<double> e(n);
  for (int s = 0; s < samples; ++s) {
    double len = 0.0;
    do {
      len = 0.0;
      for (auto& x : e) {
        x = normal(rng);
        len += x * x;
      }
    } while (len == 0.0);
    len = std::sqrt(len);
    for (auto& x : e) x /= len;
    const double m = div.directional_mass(e);
    if (!(m > 0.0)) {
      ++out.skipped;
      continue;
    }
    const double l = std::log(m);
    sum += l;
    sum2 += l * l;
    ++out.used;
  }
  if (out.used == 0) throw Error(ErrorKind::ZeroDirectionalMass, "every sampled direction has zero mass");
  const double mean = sum / out.used;
  const double var = out.used > 1 ? std::max(0.0, (sum2 - out.used * mean * mean) / (out.used - 1)) : 0.0;
  out.estimate = std::exp(mean);
  out.std_error = out.estimate * std::sqrt(var / out.used);
  out.rhs_scale = std::pow(n * out.estimate, n / (n - 1.0));
  return out;
}

Report verify_log_avg(const TensorField& a, int samples, std::uint64_t seed) {
  const DirectionalAverage avg = log_avg_direction(a, samples, seed);
  const DetRoot lhs = integral_det_root(a);
  Report r = Report::make("log-avg", lhs.value, avg.rhs_scale);
  r.grid = a.grid().describe();
  r.add("estimate", avg.estimate);
  r.add("std_error", avg.std_error);
  r.add("samples", std::to_string(avg.used));
  r.add("skipped", std::to_string(avg.skipped));
  r.add("seed", std::to_string(seed));
  if (lhs.clamped > 0) r.downgrade(Status::clamped(lhs.clamped));
  return r;
}

Report verify_mulest(std::span<const TensorField> as) {
  if (as.empty()) throw Error(ErrorKind::DimensionMismatch, "empty tuple");
  const int n = as[0].dim();
  if (static_cast<int>(as.size()) != n) throw Error(ErrorKind::DimensionMismatch, "tuple length must equal n");
  for (const auto& a : as) {
    if (!(a.grid() == as[0].grid())) throw Error(ErrorKind::GridMismatch, "mulest fields on different grids");
    require_psd(a, "verify_mulest");
    require_square(a);
  }
  const double vol = as[0].grid().cell_volume();
  struct Acc {
    double v = 0.0;
    std::int64_t k = 0;
  };
  const Acc acc = reduce_cells(
      as[0].cell_count(), Acc{},
      [&](std::int64_t c) {
        std::vector<SymMat> local(n);
        double scale = 0.0;
        for (int j = 0; j < n; ++j) {
          local[j] = as[j].at(c);
          scale = std::max(scale, local[j].frobenius_norm());
        }
        const Root r = det_root(mixed_det(local), scale, n);
        return Acc{r.value * vol, r.clamped ? 1 : 0};
      },
      [](Acc x, Acc y) { return Acc{x.v + y.v, x.k + y.k}; });
  double prod = 1.0;
  std::vector<double> masses;
  for (const auto& a : as) {
    masses.push_back(divergence(a).total_mass());
    prod *= masses.back();
  }
  Report r = Report::make("mulest", acc.v, std::pow(prod, 1.0 / (n - 1)));
  r.grid = as[0].grid().describe();
  r.add("div_mass", masses);
  if (acc.k > 0) r.downgrade(Status::clamped(acc.k));
  return r;
}

std::vector<double> snap_singular_point(const Grid& g, std::span<const double> xi) {
  if (static_cast<int>(xi.size()) != g.dim()) throw Error(ErrorKind::DimensionMismatch, "singular point");
  if (g.on_node(xi)) throw Error(ErrorKind::SingularOnNode, "singular point coincides with a cell centre");
  return g.snap_to_dual(xi);
}

TensorField extreme_tensor(const Grid& g, const KernelSpec& k, double resolve_radius) {
  const int n = g.dim();
  k.validate(n);
  const std::vector<double> xi = snap_singular_point(g, k.xi);
  const double radius = k.cutoff_radius;
  const bool profiled = k.kind == KernelKind::SphereProfile;
  TensorField f = TensorField::from_function(g, n, [&](std::span<const double> p) {
    double x[kMaxDim];
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      x[i] = p[i] - xi[i];
      r2 += x[i] * x[i];
    }
    const double r = std::sqrt(r2);
    double scale = cutoff(r, radius) / std::pow(r, n + 1);
    if (profiled && scale != 0.0) {
      double u[kMaxDim];
      for (int i = 0; i < n; ++i) u[i] = x[i] / r;
      scale *= std::pow((*k.profile)(std::span<const double>(u, n)), n - 1);
    }
    SymMat m = SymMat::outer(std::span<const double>(x, n));
    m *= scale;
    return m;
  });
  if (resolve_radius < 0.0) {
    double dist = std::numeric_limits<double>::infinity();
    double h = 0.0;
    for (int i = 0; i < n; ++i) {
      dist = std::min({dist, xi[i] - g.origin()[i], g.upper(i) - xi[i]});
      h = std::max(h, g.spacing()[i]);
    }
    dist = std::max(dist, 0.0);
    resolve_radius = std::max(4.0 * h, 0.5 * std::min(radius, dist));
  }
  f.add_singular_point({xi, resolve_radius});
  f.mark_psd();
  return f;
}

namespace {

struct SnappedKernel {
  KernelSpec spec;
  explicit SnappedKernel(const Grid& g, const KernelSpec& k) : spec(k) {
    const int n = g.dim();
    spec.validate(n);
    spec.xi = snap_singular_point(g, k.xi);
    if (spec.omega.empty()) {
      spec.omega.assign(n, 0.0);
      spec.omega[0] = 1.0;
    }
  }
  double operator()(const Grid& g, std::int64_t c) const {
    double x[kMaxDim];
    g.center(c, std::span<double>(x, g.dim()));
    for (int i = 0; i < g.dim(); ++i) x[i] -= spec.xi[i];
    return kernel_weight(spec, std::span<const double>(x, g.dim()));
  }
};

}  // namespace

double schur_kernel_functional(const TensorField& a, const KernelSpec& k) {
  require_psd(a, "schur_kernel_functional");
  require_square(a);
  const Grid& g = a.grid();
  const int n = a.dim();
  const SnappedKernel kern(g, k);
  const double vol = g.cell_volume();
  return sum_cells(a.cell_count(), [&](std::int64_t c) {
    const SymMat m = a.at(c);
    const double d = det(m);
    const double scale = std::pow(m.frobenius_norm(), n);
    if (d <= 1e-14 * scale) return 0.0;
    const double q = m.quadratic_form(kern.spec.omega);
    if (q <= 0.0) {
      throw Error(ErrorKind::DegenerateDirection, "omega^T A omega = 0 with det A > 0 at cell " + std::to_string(c));
    }
    return kern(g, c) * std::pow(d / q, 1.0 / (n - 1)) * vol;
  });
}

Report verify_schur(const TensorField& a, const KernelSpec& k) {
  const double lhs = schur_kernel_functional(a, k);
  const DivMeasure div = divergence(a);
  Report r = Report::make("schur", lhs, div.total_mass());
  r.grid = a.grid().describe();
  r.add("xi", snap_singular_point(a.grid(), k.xi));
  if (!k.omega.empty()) r.add("omega", k.omega);
  return r;
}

Report sigma_schur_functional(const TensorField& k_field, const TensorField& sigma, const KernelSpec& kern_spec) {
  require_square(k_field);
  const Grid& g = k_field.grid();
  const int n = g.dim();
  if (!(sigma.grid() == g)) throw Error(ErrorKind::GridMismatch, "sigma and K on different grids");
  if (sigma.dim() != n - 1) throw Error(ErrorKind::DimensionMismatch, "sigma must have dimension n-1");
  require_psd(sigma, "sigma_schur_functional");
  const SnappedKernel kern(g, kern_spec);
  const double vol = g.cell_volume();
  std::int64_t clamped = 0;
  double lhs = 0.0;
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const SymMat s = sigma.at(c);
    const Root r = det_root(det(s), s.frobenius_norm(), n);
    clamped += r.clamped ? 1 : 0;
    if (r.value != 0.0) lhs += kern(g, c) * r.value * vol;
  }
  TensorField a(g, n);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    SymMat m = k_field.at(c);
    const SymMat s = sigma.at(c);
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i; j < n - 1; ++j) m.packed()[packed_index(n, i + 1, j + 1)] += s(i, j);
    }
    a.set(c, m);
  }
  for (const auto& sp : k_field.singular_points()) a.add_singular_point(sp);
  Report r = Report::make("sigma-schur", lhs, divergence(a).total_mass());
  r.grid = g.describe();
  if (clamped > 0) r.downgrade(Status::clamped(clamped));
  return r;
}

}  // namespace cilab
