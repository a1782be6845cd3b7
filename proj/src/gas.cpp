#include "cilab/gas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cilab/error.hpp"
#include "cilab/parallel.hpp"

namespace cilab {

FlowField::FlowField(Grid g, std::vector<double> t) : grid(std::move(g)), times(std::move(t)) {
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) throw Error(ErrorKind::InvalidArgument, "instants must increase");
  }
  const auto n = static_cast<std::size_t>(grid.cell_count());
  FlowSnapshot zero{std::vector<double>(n, 0.0), std::vector<double>(n * grid.dim(), 0.0),
                    std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  snapshots.assign(times.size(), zero);
}

double FlowField::max_density() const {
  double m = 0.0;
  for (const auto& s : snapshots) {
    for (double r : s.rho) m = std::max(m, r);
  }
  return m;
}

void FlowField::apply_vacuum_convention() {
  const double thr = vacuum_threshold();
  const int dd = d();
  for (auto& s : snapshots) {
    for (std::size_t c = 0; c < s.rho.size(); ++c) {
      if (s.rho[c] > thr) continue;
      for (int i = 0; i < dd; ++i) s.u[c * dd + i] = 0.0;
    }
  }
}

FlowField FlowField::truncated(std::size_t k) const {
  FlowField out;
  out.grid = grid;
  const std::size_t keep = std::min(k + 1, times.size());
  out.times.assign(times.begin(), times.begin() + keep);
  out.snapshots.assign(snapshots.begin(), snapshots.begin() + keep);
  return out;
}

FlowSummary summary(const FlowField& w) {
  FlowSummary s;
  const double vol = w.grid.cell_volume();
  const int d = w.d();
  for (const auto& snap : w.snapshots) {
    const double m = sum_cells(w.cells(), [&](std::int64_t c) { return snap.rho[c]; }) * vol;
    const double e = sum_cells(w.cells(), [&](std::int64_t c) {
                       double u2 = 0.0;
                       for (int i = 0; i < d; ++i) u2 += snap.u[c * d + i] * snap.u[c * d + i];
                       return 0.5 * snap.rho[c] * u2 + snap.rho[c] * snap.e[c];
                     }) *
                     vol;
    s.mass.push_back(m);
    s.energy.push_back(e);
  }
  if (s.mass.empty()) return s;
  s.M = s.mass.front();
  s.E0 = s.energy.front();
  s.ubar = s.M > 0.0 ? std::sqrt(2.0 * s.E0 / s.M) : 0.0;
  for (std::size_t k = 0; k < s.mass.size(); ++k) {
    if (s.M > 0.0) s.mass_drift = std::max(s.mass_drift, std::abs(s.mass[k] - s.M) / s.M);
    if (s.E0 > 0.0) {
      s.energy_overshoot = std::max(s.energy_overshoot, (s.energy[k] - s.E0) / s.E0);
    } else if (s.energy[k] > 0.0) {
      s.energy_overshoot = std::numeric_limits<double>::infinity();
    }
  }
  s.admissible = s.mass_drift <= kAdmissibleTol && s.energy_overshoot <= kAdmissibleTol;
  return s;
}

void check_states(const FlowField& w) {
  const int d = w.d();
  for (std::size_t k = 0; k < w.snapshots.size(); ++k) {
    const auto& s = w.snapshots[k];
    for (std::int64_t c = 0; c < w.cells(); ++c) {
      auto bad = [&](const char* field) {
        throw Error(ErrorKind::NotAdmissible,
                    std::string(field) + " at snapshot " + std::to_string(k) + " cell " + std::to_string(c));
      };
      if (!(s.rho[c] >= 0.0) || !std::isfinite(s.rho[c])) bad("rho");
      if (!(s.p[c] >= 0.0) || !std::isfinite(s.p[c])) bad("p");
      if (!(s.e[c] >= 0.0) || !std::isfinite(s.e[c])) bad("e");
      for (int i = 0; i < d; ++i) {
        if (!std::isfinite(s.u[c * d + i])) bad("u");
      }
    }
  }
}

SymMat euler_state(double rho, std::span<const double> u, double p) {
  if (rho < 0.0) throw Error(ErrorKind::NegativeState, "rho = " + std::to_string(rho));
  if (p < 0.0) throw Error(ErrorKind::NegativeState, "p = " + std::to_string(p));
  const int d = static_cast<int>(u.size());
  std::vector<double> uu(u.begin(), u.end());
  SymMat a = rank_one(rho, uu);
  for (int i = 1; i <= d; ++i) a.packed()[packed_index(d + 1, i, i)] += p;
  return a;
}

TensorField euler_tensor(const FlowField& w) {
  const std::size_t nt = w.times.size();
  if (nt < 1) throw Error(ErrorKind::InvalidArgument, "flow has no instants");
  const double dt = nt > 1 ? w.times[1] - w.times[0] : 1.0;
  for (std::size_t k = 1; k < nt; ++k) {
    if (std::abs(w.times[k] - w.times[k - 1] - dt) > 1e-9 * dt) {
      throw Error(ErrorKind::InvalidArgument, "euler_tensor needs equally spaced instants");
    }
  }
  const int d = w.d();
  std::vector<double> origin{w.times[0] - 0.5 * dt}, spacing{dt};
  std::vector<std::int64_t> counts{static_cast<std::int64_t>(nt)};
  for (int i = 0; i < d; ++i) {
    origin.push_back(w.grid.origin()[i]);
    spacing.push_back(w.grid.spacing()[i]);
    counts.push_back(w.grid.counts()[i]);
  }
  TensorField a(Grid(origin, spacing, counts), d + 1);
  const std::int64_t cells = w.cells();
  for (std::size_t k = 0; k < nt; ++k) {
    const auto& s = w.snapshots[k];
    for (std::int64_t c = 0; c < cells; ++c) {
      try {
        a.set(static_cast<std::int64_t>(k) * cells + c,
              euler_state(s.rho[c], std::span<const double>(s.u.data() + c * d, d), s.p[c]));
      } catch (const Error& e) {
        throw Error(ErrorKind::NegativeState,
                    "snapshot " + std::to_string(k) + " cell " + std::to_string(c) + ": " + e.what());
      }
    }
  }
  a.mark_psd();
  return a;
}

double cor(std::span<const std::vector<double>> us) {
  const int n = static_cast<int>(us.size());
  if (n < 2 || n > kMaxDim) throw Error(ErrorKind::DimensionMismatch, "cor needs 2..6 vectors");
  double m[kMaxDim * kMaxDim];
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(us[j].size()) != n - 1) throw Error(ErrorKind::DimensionMismatch, "cor vector length");
    m[j] = 1.0;
    for (int i = 1; i < n; ++i) m[i * n + j] = us[j][i - 1];
  }
  return det_dense(std::span<const double>(m, n * n), n);
}

ShiftSet ShiftSet::from(std::vector<std::vector<double>> rest) {
  ShiftSet s;
  const std::size_t d = rest.empty() ? 0 : rest.front().size();
  s.h.push_back(std::vector<double>(d, 0.0));
  for (auto& v : rest) s.h.push_back(std::move(v));
  return s;
}

bool ShiftSet::affinely_independent() const {
  double scale = 0.0;
  for (const auto& v : h) {
    for (double x : v) scale = std::max(scale, std::abs(x));
  }
  if (scale == 0.0) return false;
  return std::abs(cor(h)) > 1e-12 * std::pow(scale, static_cast<double>(h.size()) - 1.0);
}

std::vector<std::vector<std::int64_t>> ShiftSet::offsets(const Grid& g) const {
  std::vector<std::vector<std::int64_t>> out;
  for (const auto& v : h) {
    if (static_cast<int>(v.size()) != g.dim()) throw Error(ErrorKind::DimensionMismatch, "shift length");
    std::vector<std::int64_t> k(g.dim());
    for (int i = 0; i < g.dim(); ++i) k[i] = std::llround(v[i] / g.spacing()[i]);
    out.push_back(std::move(k));
  }
  return out;
}

std::vector<double> trapezoid_weights(std::span<const double> times) {
  std::vector<double> wts(times.size(), 0.0);
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double half = 0.5 * (times[k + 1] - times[k]);
    wts[k] += half;
    wts[k + 1] += half;
  }
  return wts;
}

namespace {

double scaled_rhs(const FlowSummary& s, int d) { return std::pow(s.M, 1.0 / d) * std::sqrt(s.M * s.E0); }

void audit(Report& r, const FlowSummary& s) {
  r.add("M", s.M);
  r.add("E0", s.E0);
  if (!s.admissible) {
    r.add("mass_drift", s.mass_drift);
    r.add("energy_overshoot", s.energy_overshoot);
    r.downgrade(Status::inadmissible());
  }
}

// H at one snapshot for integer cell offsets (offsets[0] is the base point).
double h_offsets(const FlowField& w, std::size_t k, const std::vector<std::vector<std::int64_t>>& offs) {
  const Grid& g = w.grid;
  const int d = w.d();
  const auto& s = w.snapshots[k];
  const double thr = w.vacuum_threshold();
  const double vol = g.cell_volume();
  const int n = d + 1;
  return sum_cells(w.cells(), [&](std::int64_t c) {
    std::int64_t idx[kMaxDim], j_idx[kMaxDim];
    g.unravel(c, std::span<std::int64_t>(idx, d));
    double prod = 1.0;
    double m[kMaxDim * kMaxDim];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < d; ++i) {
        j_idx[i] = idx[i] + offs[j][i];
        if (j_idx[i] < 0 || j_idx[i] >= g.counts()[i]) return 0.0;
      }
      const std::int64_t cj = g.ravel(std::span<const std::int64_t>(j_idx, d));
      const double r = s.rho[cj];
      if (r <= thr) return 0.0;
      prod *= r;
      m[j] = 1.0;
      for (int i = 0; i < d; ++i) m[(i + 1) * n + j] = s.u[cj * d + i];
    }
    const double cr = det_dense(std::span<const double>(m, n * n), n);
    return std::pow(prod * cr * cr, 1.0 / d) * vol;
  });
}

double snap_tau(std::span<const double> times, double tau) {
  if (times.size() < 2 || tau < times.front() || tau > times.back()) {
    for (double t : times) {
      if (t == tau) throw Error(ErrorKind::SingularOnNode, "tau coincides with an instant");
    }
    return tau;
  }
  std::size_t best = 0;
  double dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double mid = 0.5 * (times[k] + times[k + 1]);
    if (std::abs(mid - tau) < dist) {
      dist = std::abs(mid - tau);
      best = k;
    }
  }
  return 0.5 * (times[best] + times[best + 1]);
}

std::vector<double> snap_eta(const Grid& g, std::span<const double> eta) {
  if (static_cast<int>(eta.size()) != g.dim()) throw Error(ErrorKind::DimensionMismatch, "eta length");
  if (g.on_node(eta)) throw Error(ErrorKind::SingularOnNode, "eta coincides with a cell centre");
  return g.snap_to_dual(eta);
}

// int ((t-tau)^2 / (a (t-tau)^2 + b |y-eta|^2)^{d/2+1})^{1/d} q(t, y) dy dt
// over snapped (tau, eta); `density(k, c)` supplies q.
template <class Density>
double kernel_integral(const FlowField& w, double tau, std::span<const double> eta, double a, double b,
                       Density density) {
  const Grid& g = w.grid;
  const int d = w.d();
  const auto wts = trapezoid_weights(w.times);
  const double vol = g.cell_volume();
  double total = 0.0;
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    if (wts[k] == 0.0) continue;
    const double s = w.times[k] - tau;
    const double s2 = s * s;
    total += wts[k] * sum_cells(w.cells(), [&](std::int64_t c) {
               const double q = density(k, c);
               if (q == 0.0) return 0.0;
               double x[kMaxDim];
               g.center(c, std::span<double>(x, d));
               double r2 = 0.0;
               for (int i = 0; i < d; ++i) r2 += (x[i] - eta[i]) * (x[i] - eta[i]);
               const double ker = std::pow(s2 / std::pow(a * s2 + b * r2, 0.5 * d + 1.0), 1.0 / d);
               return ker * q * vol;
             });
  }
  return total;
}

}  // namespace

double galilean_energy(const FlowField& w) {
  if (w.snapshots.empty()) return 0.0;
  const int d = w.d();
  const auto& s = w.snapshots.front();
  const double vol = w.grid.cell_volume();
  double mass = 0.0, internal = 0.0;
  std::vector<double> mom(d, 0.0);
  for (std::int64_t c = 0; c < w.cells(); ++c) {
    mass += s.rho[c] * vol;
    internal += s.rho[c] * s.e[c] * vol;
    for (int i = 0; i < d; ++i) mom[i] += s.rho[c] * s.u[c * d + i] * vol;
  }
  if (mass == 0.0) return 0.0;
  double spread = 0.0;
  for (std::int64_t c = 0; c < w.cells(); ++c) {
    double v2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double v = s.u[c * d + i] - mom[i] / mass;
      v2 += v * v;
    }
    spread += s.rho[c] * v2 * vol;
  }
  return 0.5 * mass * spread + mass * internal;
}

Report functional_pgd(const FlowField& w) {
  check_states(w);
  const FlowSummary s = summary(w);
  const int d = w.d();
  const auto wts = trapezoid_weights(w.times);
  const double vol = w.grid.cell_volume();
  double lhs = 0.0;
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    const auto& snap = w.snapshots[k];
    lhs += wts[k] * sum_cells(w.cells(), [&](std::int64_t c) {
             return snap.p[c] == 0.0 ? 0.0 : std::pow(snap.rho[c], 1.0 / d) * snap.p[c] * vol;
           });
  }
  Report r = Report::make("pgd", lhs, scaled_rhs(s, d));
  r.grid = w.grid.describe();
  const double g = galilean_energy(w);
  const double rg = std::pow(s.M, 1.0 / d) * std::sqrt(g);
  r.add("ratio_galilean", rg > 0.0 ? lhs / rg : 0.0);
  audit(r, s);
  return r;
}

double functional_h(const FlowField& w, std::size_t t_index, const ShiftSet& s) {
  check_states(w);
  if (t_index >= w.times.size()) throw Error(ErrorKind::InvalidArgument, "t_index out of range");
  if (static_cast<int>(s.h.size()) != w.d() + 1) throw Error(ErrorKind::DimensionMismatch, "need d+1 shifts");
  return h_offsets(w, t_index, s.offsets(w.grid));
}

Report functional_estuu(const FlowField& w, const ShiftSet& s) {
  check_states(w);
  if (static_cast<int>(s.h.size()) != w.d() + 1) throw Error(ErrorKind::DimensionMismatch, "need d+1 shifts");
  const FlowSummary sum = summary(w);
  const int d = w.d();
  const auto offs = s.offsets(w.grid);
  const auto wts = trapezoid_weights(w.times);
  double lhs = 0.0;
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    if (wts[k] != 0.0) lhs += wts[k] * h_offsets(w, k, offs);
  }
  Report r = Report::make("estuu", lhs, scaled_rhs(sum, d));
  r.grid = w.grid.describe();
  std::vector<double> flat;
  for (const auto& o : offs) {
    for (int i = 0; i < d; ++i) flat.push_back(static_cast<double>(o[i]) * w.grid.spacing()[i]);
  }
  r.add("shifts", flat);
  r.add("affinely_independent", s.affinely_independent() ? "1" : "0");
  const double g = galilean_energy(w);
  const double rg = std::pow(sum.M, 1.0 / d) * std::sqrt(g);
  r.add("ratio_galilean", rg > 0.0 ? lhs / rg : 0.0);
  audit(r, sum);
  return r;
}

std::vector<Report> direct_bound(const FlowField& w, long t_index, std::span<const std::vector<double>> partial) {
  check_states(w);
  const int d = w.d();
  if (static_cast<int>(partial.size()) != d - 1) throw Error(ErrorKind::DimensionMismatch, "need d-1 partial shifts");
  if (t_index >= static_cast<long>(w.times.size())) throw Error(ErrorKind::InvalidArgument, "t_index out of range");
  const Grid& g = w.grid;
  const FlowSummary sum = summary(w);
  const double thr = w.vacuum_threshold();

  // Support bounding box over all instants bounds the useful h_d offsets.
  std::vector<std::int64_t> lo(d, std::numeric_limits<std::int64_t>::max()), hi(d, -1);
  std::vector<std::int64_t> idx(d);
  for (const auto& s : w.snapshots) {
    for (std::int64_t c = 0; c < w.cells(); ++c) {
      if (s.rho[c] <= thr) continue;
      g.unravel(c, idx);
      for (int i = 0; i < d; ++i) {
        lo[i] = std::min(lo[i], idx[i]);
        hi[i] = std::max(hi[i], idx[i]);
      }
    }
  }

  ShiftSet base;
  base.h.push_back(std::vector<double>(d, 0.0));
  base.h.insert(base.h.end(), partial.begin(), partial.end());
  base.h.push_back(std::vector<double>(d, 0.0));
  auto offs = base.offsets(g);
  std::vector<std::int64_t> span(d, 0), count(d, 1);
  std::int64_t total = hi[0] >= 0 ? 1 : 0;
  for (int i = 0; i < d && total > 0; ++i) {
    span[i] = hi[i] - lo[i];
    count[i] = 2 * span[i] + 1;
    total *= count[i];
  }
  const std::size_t nt = w.times.size();
  const auto wts = trapezoid_weights(w.times);
  std::vector<double> direct(nt, 0.0);
  double ci_best = 0.0;
  std::vector<std::int64_t> ci_offset(d, 0);
  const double dh = g.cell_volume();
  for (std::int64_t o = 0; o < total; ++o) {
    std::int64_t rest = o;
    for (int i = d - 1; i >= 0; --i) {
      offs[d][i] = rest % count[i] - span[i];
      rest /= count[i];
    }
    double integral = 0.0;
    for (std::size_t k = 0; k < nt; ++k) {
      const bool needed = wts[k] != 0.0 || t_index < 0 || static_cast<long>(k) == t_index;
      if (!needed) continue;
      const double hk = h_offsets(w, k, offs);
      direct[k] += std::pow(hk, d) * dh;
      integral += wts[k] * hk;
    }
    if (integral > ci_best) {
      ci_best = integral;
      ci_offset = offs[d];
    }
  }
  long at = t_index;
  if (at < 0) at = static_cast<long>(std::max_element(direct.begin(), direct.end()) - direct.begin());
  const double direct_lhs = direct[at];
  Report direct_row = Report::make("direct", direct_lhs, sum.M * std::pow(sum.E0, d));
  direct_row.grid = g.describe();
  direct_row.add("t_index", std::to_string(at));
  direct_row.add("offsets", std::to_string(total));
  direct_row.add("tail", 0.0);
  direct_row.add("norm", "Linf_t Ld_h");
  audit(direct_row, sum);

  Report ci_row = Report::make("direct-ci", ci_best, scaled_rhs(sum, d));
  ci_row.grid = g.describe();
  std::vector<double> best(d);
  for (int i = 0; i < d; ++i) best[i] = static_cast<double>(ci_offset[i]) * g.spacing()[i];
  ci_row.add("h_d", best);
  ci_row.add("norm", "Linf_h L1_t");
  audit(ci_row, sum);
  return {direct_row, ci_row};
}

namespace {

Report schurp_impl(const FlowField& w, double tau, std::span<const double> eta, bool homogeneous) {
  check_states(w);
  const FlowSummary s = summary(w);
  const int d = w.d();
  if (homogeneous && !(s.E0 > 0.0)) throw Error(ErrorKind::ZeroEnergy, "E0 = 0");
  const double t = snap_tau(w.times, tau);
  const std::vector<double> e = snap_eta(w.grid, eta);
  auto pressure = [&w](std::size_t k, std::int64_t c) { return w.snapshots[k].p[c]; };
  Report r;
  if (homogeneous) {
    const double lhs = kernel_integral(w, t, e, s.E0, s.M, pressure);
    r = Report::make("schurp", lhs, std::pow(s.E0, 0.5 - 1.0 / d));
    const double g = galilean_energy(w);
    if (g > 0.0) {
      const double eg = g / s.M;
      const double lg = kernel_integral(w, t, e, eg, s.M, pressure);
      r.add("lhs_galilean", lg);
      r.add("ratio_galilean", lg / std::pow(eg, 0.5 - 1.0 / d));
    }
  } else {
    const double lhs = kernel_integral(w, t, e, 1.0, 1.0, pressure);
    r = Report::make("schurp-nonhom", lhs, s.M + std::sqrt(s.M * s.E0));
  }
  r.grid = w.grid.describe();
  r.add("tau", t);
  r.add("eta", e);
  audit(r, s);
  return r;
}

}  // namespace

Report functional_schurp(const FlowField& w, double tau, std::span<const double> eta) {
  return schurp_impl(w, tau, eta, true);
}

Report functional_schurp_nonhom(const FlowField& w, double tau, std::span<const double> eta) {
  return schurp_impl(w, tau, eta, false);
}

Report schurp_sup(const FlowField& w, int time_stride, int space_stride) {
  if (time_stride < 1 || space_stride < 1) throw Error(ErrorKind::InvalidArgument, "strides must be >= 1");
  if (w.times.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two instants");
  const Grid& g = w.grid;
  const int d = w.d();
  std::vector<std::int64_t> steps(d);
  std::int64_t corners = 1;
  for (int i = 0; i < d; ++i) {
    steps[i] = g.counts()[i] / space_stride + 1;
    corners *= steps[i];
  }
  Report best;
  bool first = true;
  int evaluations = 0;
  for (std::size_t k = 0; k + 1 < w.times.size(); k += time_stride) {
    const double tau = 0.5 * (w.times[k] + w.times[k + 1]);
    for (std::int64_t c = 0; c < corners; ++c) {
      std::vector<double> eta(d);
      std::int64_t rest = c;
      for (int i = d - 1; i >= 0; --i) {
        eta[i] = g.origin()[i] + static_cast<double>((rest % steps[i]) * space_stride) * g.spacing()[i];
        rest /= steps[i];
      }
      Report r = functional_schurp(w, tau, eta);
      ++evaluations;
      if (first || r.lhs > best.lhs) {
        best = r;
        first = false;
      }
    }
  }
  best.add("time_stride", std::to_string(time_stride));
  best.add("space_stride", std::to_string(space_stride));
  best.add("evaluations", std::to_string(evaluations));
  return best;
}

namespace {

// Cell averages of `v` (stride `comp` values per cell) translated by `shift`
// cells along `axis`; content leaving the box is dropped.
void translate_axis(const Grid& g, std::vector<double>& v, int comp, int axis, double shift) {
  double m = std::floor(shift);
  double theta = shift - m;
  if (theta < 1e-9) {
    theta = 0.0;
  } else if (theta > 1.0 - 1e-9) {
    theta = 0.0;
    m += 1.0;
  }
  const auto mi = static_cast<std::int64_t>(m);
  if (mi == 0 && theta == 0.0) return;
  const std::int64_t n = g.counts()[axis];
  const std::int64_t st = g.stride(axis);
  std::vector<double> out(v.size(), 0.0);
  std::vector<std::int64_t> idx(g.dim());
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const std::int64_t i = (c / st) % n;
    const std::int64_t a = i - mi, b = i - mi - 1;
    for (int q = 0; q < comp; ++q) {
      double val = 0.0;
      if (a >= 0 && a < n) val += (1.0 - theta) * v[(c + (a - i) * st) * comp + q];
      if (theta != 0.0 && b >= 0 && b < n) val += theta * v[(c + (b - i) * st) * comp + q];
      out[c * comp + q] = val;
    }
  }
  v.swap(out);
}

}  // namespace

FlowField galilean_boost(const FlowField& w, std::span<const double> wvec) {
  const int d = w.d();
  if (static_cast<int>(wvec.size()) != d) throw Error(ErrorKind::DimensionMismatch, "boost length");
  FlowField out = w;
  const double thr = w.vacuum_threshold();
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    const auto& s = w.snapshots[k];
    const std::int64_t n = w.cells();
    std::vector<double> rho = s.rho, p = s.p, mom(n * d), eint(n);
    for (std::int64_t c = 0; c < n; ++c) {
      for (int i = 0; i < d; ++i) mom[c * d + i] = s.rho[c] * s.u[c * d + i];
      eint[c] = s.rho[c] * s.e[c];
    }
    for (int axis = 0; axis < d; ++axis) {
      const double shift = w.times[k] * wvec[axis] / w.grid.spacing()[axis];
      translate_axis(w.grid, rho, 1, axis, shift);
      translate_axis(w.grid, p, 1, axis, shift);
      translate_axis(w.grid, eint, 1, axis, shift);
      translate_axis(w.grid, mom, d, axis, shift);
    }
    auto& o = out.snapshots[k];
    o.rho = rho;
    o.p = p;
    for (std::int64_t c = 0; c < n; ++c) {
      const bool matter = rho[c] > thr;
      o.e[c] = matter ? eint[c] / rho[c] : 0.0;
      for (int i = 0; i < d; ++i) o.u[c * d + i] = matter ? mom[c * d + i] / rho[c] + wvec[i] : 0.0;
    }
  }
  return out;
}

FlowField scaling_transform(const FlowField& w, double mu) {
  if (!(mu > 0.0)) throw Error(ErrorKind::InvalidArgument, "mu must be > 0");
  std::vector<double> origin = w.grid.origin(), spacing = w.grid.spacing();
  for (auto& x : origin) x *= mu;
  for (auto& x : spacing) x *= mu;
  FlowField out = w;
  out.grid = Grid(origin, spacing, w.grid.counts());
  for (auto& s : out.snapshots) {
    for (auto& x : s.u) x *= mu;
    for (auto& x : s.p) x *= mu * mu;
    for (auto& x : s.e) x *= mu * mu;
  }
  return out;
}

Report functional_defect(const FlowField& w, const DefectField& sigma, double tau, std::span<const double> eta) {
  check_states(w);
  const int d = w.d();
  if (!(sigma.grid == w.grid) || sigma.times != w.times || sigma.sigma.size() != w.times.size()) {
    throw Error(ErrorKind::GridMismatch, "defect field and flow disagree on grid or instants");
  }
  for (const auto& s : sigma.sigma) {
    if (s.dim() != d || !(s.grid() == w.grid)) throw Error(ErrorKind::DimensionMismatch, "defect dimension");
    if (!s.psd_flag()) throw Error(ErrorKind::NotPSDField, "defect field is not marked PSD");
  }
  const FlowSummary sum = summary(w);
  if (!(sum.E0 > 0.0)) throw Error(ErrorKind::ZeroEnergy, "E0 = 0");
  const double t = snap_tau(w.times, tau);
  const std::vector<double> e = snap_eta(w.grid, eta);
  std::int64_t clamped = 0;
  std::vector<std::vector<double>> root(w.times.size());
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    root[k].assign(static_cast<std::size_t>(w.cells()), 0.0);
    for (std::int64_t c = 0; c < w.cells(); ++c) {
      const SymMat m = sigma.sigma[k].at(c);
      const double dt = det(m);
      if (dt > 0.0) {
        root[k][c] = std::pow(dt, 1.0 / d);
      } else if (dt < -1e-12 * std::pow(m.frobenius_norm(), d)) {
        ++clamped;
      }
    }
  }
  const double lhs =
      kernel_integral(w, t, e, sum.E0, sum.M, [&root](std::size_t k, std::int64_t c) { return root[k][c]; });
  Report r = Report::make("defect", lhs, std::pow(sum.E0, 0.5 - 1.0 / d));
  r.grid = w.grid.describe();
  r.add("tau", t);
  r.add("eta", e);
  double overshoot = 0.0;
  const double vol = w.grid.cell_volume();
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    double tr = 0.0;
    for (std::int64_t c = 0; c < w.cells(); ++c) tr += sigma.sigma[k].at(c).trace() * vol;
    overshoot = std::max(overshoot, (sum.energy[k] + 0.5 * tr - sum.E0) / sum.E0);
  }
  r.add("energy_overshoot", overshoot);
  audit(r, sum);
  if (overshoot > kAdmissibleTol) r.downgrade(Status::inadmissible());
  if (clamped > 0) r.downgrade(Status::clamped(clamped));
  return r;
}

}  // namespace cilab
