#include "cilab/sharpness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "cilab/error.hpp"
#include "cilab/families.hpp"
#include "cilab/format.hpp"
#include "cilab/verify.hpp"

namespace cilab {

Family parse_family(const std::string& id) {
  if (id == "radial_smoothed_indicator") return Family::RadialSmoothedIndicator;
  if (id == "gaussian_profiles") return Family::GaussianProfiles;
  if (id == "anisotropic_ellipsoids") return Family::AnisotropicEllipsoids;
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + id + "'");
}

std::string family_id(Family f) {
  switch (f) {
    case Family::RadialSmoothedIndicator:
      return "radial_smoothed_indicator";
    case Family::GaussianProfiles:
      return "gaussian_profiles";
    case Family::AnisotropicEllipsoids:
      return "anisotropic_ellipsoids";
  }
  return {};
}

std::vector<std::string> family_params(Family f) {
  switch (f) {
    case Family::RadialSmoothedIndicator:
      return {"radius", "width"};
    case Family::GaussianProfiles:
      return {"sigma", "q"};
    case Family::AnisotropicEllipsoids:
      return {"aspect", "width"};
  }
  return {};
}

ProbeSetup ProbeSetup::resolved() const {
  ProbeSetup s = *this;
  const double h = 2.0 * half_width / static_cast<double>(cells);
  std::vector<double> lo, hi, x0;
  switch (family) {
    case Family::RadialSmoothedIndicator:
      lo = {0.25 * half_width, 2.0 * h};
      hi = {0.8 * half_width, 0.3 * half_width};
      x0 = {0.6 * half_width, 0.15 * half_width};
      break;
    case Family::GaussianProfiles:
      lo = {0.1 * half_width, 1.0};
      hi = {0.4 * half_width, 8.0};
      x0 = {0.25 * half_width, 2.0};
      break;
    case Family::AnisotropicEllipsoids:
      lo = {1.0, 2.0 * h / (0.5 * half_width)};
      hi = {3.0, 0.4};
      x0 = {1.5, 0.2};
      break;
  }
  if (s.lower.empty()) s.lower = lo;
  if (s.upper.empty()) s.upper = hi;
  if (s.initial.empty()) s.initial = x0;
  const std::size_t k = family_params(family).size();
  if (s.lower.size() != k || s.upper.size() != k || s.initial.size() != k) {
    throw Error(ErrorKind::DimensionMismatch, "family takes " + std::to_string(k) + " parameters");
  }
  return s;
}

TraceRow evaluate_family(const ProbeSetup& s, const std::vector<double>& params) {
  const Grid g = s.grid();
  const double h = g.spacing()[0];
  TraceRow row;
  row.params = params;
  ScalarField f;
  double width = 0.0;
  switch (s.family) {
    case Family::RadialSmoothedIndicator:
      width = params[1];
      f = smoothed_ball(g, params[0], params[1]);
      break;
    case Family::GaussianProfiles:
      width = params[0] / params[1];
      f = gaussian_profile(g, params[0], params[1]);
      break;
    case Family::AnisotropicEllipsoids: {
      // Unit-volume-preserving stretch of a ball of radius half_width / 2.
      const double r0 = 0.5 * s.half_width;
      std::vector<double> axes(s.dim, r0 / std::pow(params[0], 1.0 / (s.dim - 1)));
      axes[0] = r0 * params[0];
      width = params[1] * *std::min_element(axes.begin(), axes.end());
      f = smoothed_ellipsoid(g, axes, params[1]);
      break;
    }
  }
  row.report = verify_fund(f.times_identity());
  row.report.add("family", family_id(s.family));
  row.report.add("params", params);
  if (width < 2.0 * h * (1.0 - 1e-12)) {
    row.below_resolution = true;
    row.report.downgrade(Status::below_resolution());
  }
  return row;
}

std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                const std::vector<double>& lo, const std::vector<double>& hi, int budget,
                                double tol) {
  const std::size_t n = x0.size();
  auto clamp = [&](std::vector<double> x) {
    for (std::size_t i = 0; i < n; ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };
  int used = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++used;
    return f(x);
  };
  std::vector<double> best = clamp(std::move(x0));
  if (budget < 1) return best;
  double best_val = eval(best);

  while (used < budget) {
    std::vector<std::vector<double>> simplex{best};
    std::vector<double> vals{best_val};
    for (std::size_t i = 0; i < n && used < budget; ++i) {
      std::vector<double> v = best;
      const double step = 0.1 * (hi[i] - lo[i]);
      v[i] = v[i] + step <= hi[i] ? v[i] + step : v[i] - step;
      v = clamp(v);
      simplex.push_back(v);
      vals.push_back(eval(v));
    }
    if (simplex.size() < n + 1) break;
    const double start_best = best_val;
    while (used < budget) {
      std::vector<std::size_t> order(n + 1);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
      const std::size_t ib = order.front(), iw = order.back(), isw = order[n - 1];
      double spread = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
          spread = std::max(spread, std::abs(simplex[k][i] - simplex[ib][i]) / (hi[i] - lo[i] + 1e-300));
        }
      }
      if (spread < tol) break;
      std::vector<double> centroid(n, 0.0);
      for (std::size_t k = 0; k <= n; ++k) {
        if (k == iw) continue;
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[k][i] / static_cast<double>(n);
      }
      auto along = [&](double t) {
        std::vector<double> x(n);
        for (std::size_t i = 0; i < n; ++i) x[i] = centroid[i] + t * (simplex[iw][i] - centroid[i]);
        return clamp(x);
      };
      const std::vector<double> xr = along(-1.0);
      const double fr = eval(xr);
      if (fr < vals[ib] && used < budget) {
        const std::vector<double> xe = along(-2.0);
        const double fe = eval(xe);
        if (fe < fr) {
          simplex[iw] = xe;
          vals[iw] = fe;
        } else {
          simplex[iw] = xr;
          vals[iw] = fr;
        }
      } else if (fr < vals[isw]) {
        simplex[iw] = xr;
        vals[iw] = fr;
      } else if (used < budget) {
        const bool outside = fr < vals[iw];
        const std::vector<double> xc = along(outside ? -0.5 : 0.5);
        const double fc = eval(xc);
        if (fc < std::min(fr, vals[iw])) {
          simplex[iw] = xc;
          vals[iw] = fc;
        } else {
          for (std::size_t k = 0; k <= n && used < budget; ++k) {
            if (k == ib) continue;
            for (std::size_t i = 0; i < n; ++i) simplex[k][i] = simplex[ib][i] + 0.5 * (simplex[k][i] - simplex[ib][i]);
            simplex[k] = clamp(simplex[k]);
            vals[k] = eval(simplex[k]);
          }
        }
      }
    }
    for (std::size_t k = 0; k <= n; ++k) {
      if (vals[k] < best_val) {
        best_val = vals[k];
        best = simplex[k];
      }
    }
    if (!(best_val < start_best)) break;
  }
  return best;
}

ProbeResult probe(const ProbeSetup& setup) {
  const ProbeSetup s = setup.resolved();
  if (s.budget < 1) throw Error(ErrorKind::InvalidArgument, "budget must be >= 1");
  ProbeResult out;
  auto objective = [&](const std::vector<double>& x) {
    TraceRow row = evaluate_family(s, x);
    const double ratio = row.report.ratio;
    const bool valid = !row.below_resolution;
    out.trace.push_back(std::move(row));
    if (valid && (!out.found || ratio > out.best_ratio)) {
      out.found = true;
      out.best_ratio = ratio;
      out.best_params = x;
    }
    // Below-resolution points are kept out of the optimum.
    return valid ? -ratio : std::numeric_limits<double>::max();
  };
  nelder_mead(objective, s.initial, s.lower, s.upper, s.budget);
  return out;
}

std::vector<TraceRow> ratio_surface(const ProbeSetup& setup, const std::vector<std::vector<double>>& lattice) {
  const ProbeSetup s = setup.resolved();
  std::vector<TraceRow> rows;
  if (lattice.size() != family_params(s.family).size()) {
    throw Error(ErrorKind::DimensionMismatch, "lattice needs one list per parameter");
  }
  std::size_t total = 1;
  for (const auto& axis : lattice) total *= axis.size();
  std::vector<double> x(lattice.size());
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t rest = k;
    for (std::size_t i = lattice.size(); i-- > 0;) {
      x[i] = lattice[i][rest % lattice[i].size()];
      rest /= lattice[i].size();
    }
    rows.push_back(evaluate_family(s, x));
  }
  return rows;
}

void write_trace_csv(std::ostream& os, Family f, const std::vector<TraceRow>& rows) {
  for (const auto& p : family_params(f)) os << p << ',';
  os << "lhs,rhs_scale,ratio,status,grid\n";
  for (const auto& r : rows) {
    for (double v : r.params) os << format_double(v) << ',';
    os << format_double(r.report.lhs) << ',' << format_double(r.report.rhs_scale) << ','
       << format_double(r.report.ratio) << ',' << r.report.status.str() << ',' << r.report.grid << '\n';
  }
}

}  // namespace cilab
