#include "cilab/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cilab/error.hpp"
#include "cilab/families.hpp"
#include "cilab/format.hpp"

namespace cilab {

namespace {

// det(I + s J) = sum_k c_k s^k, c_k the sum of the order-k principal minors of J.
std::vector<double> det_polynomial(const double* jac, int d) {
  std::vector<double> c(d + 1, 0.0);
  double sub[kMaxDim * kMaxDim];
  for (unsigned mask = 0; mask < (1u << d); ++mask) {
    int idx[kMaxDim], k = 0;
    for (int i = 0; i < d; ++i) {
      if (mask & (1u << i)) idx[k++] = i;
    }
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) sub[a * k + b] = jac[idx[a] * d + idx[b]];
    }
    c[k] += det_dense(std::span<const double>(sub, k * k), k);
  }
  return c;
}

double horner(const std::vector<double>& c, double s) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) v = v * s + c[k];
  return v;
}

// Smallest s in [0, t] with det(I + s J) <= 0, or a negative value when none.
// Minima inside the interval sit at sign changes of the derivative, so roots of
// even multiplicity are found as well.
double first_crossing(const std::vector<double>& c, double t) {
  std::vector<double> dc;
  for (std::size_t k = 1; k < c.size(); ++k) dc.push_back(static_cast<double>(k) * c[k]);
  double scale = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) scale = std::max(scale, std::abs(c[k]) * std::pow(t, static_cast<double>(k)));
  const double floor = 1e-12 * scale;
  constexpr int kSegments = 256;
  for (int i = 0; i <= kSegments; ++i) {
    const double s = t * i / kSegments;
    if (horner(c, s) <= floor) return s;
    if (i == kSegments || dc.empty()) continue;
    double a = s, b = t * (i + 1) / kSegments;
    double fa = horner(dc, a), fb = horner(dc, b);
    if (!(fa < 0.0 && fb > 0.0)) continue;
    for (int it = 0; it < 100; ++it) {
      const double m = 0.5 * (a + b);
      (horner(dc, m) < 0.0 ? a : b) = m;
    }
    if (horner(c, a) <= floor) return a;
  }
  return -1.0;
}

void check_crossing(const ScalarField& rho0, const VelocityField& u0, double t) {
  const Grid& g = rho0.grid;
  const int d = g.dim();
  std::vector<double> c(d), y(d), up(d), um(d);
  double jac[kMaxDim * kMaxDim];
  for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
    if (rho0.values[cell] <= 0.0) continue;
    g.center(cell, c);
    for (int j = 0; j < d; ++j) {
      const double step = 0.25 * g.spacing()[j];
      y = c;
      y[j] = c[j] + step;
      u0(y, up);
      y[j] = c[j] - step;
      u0(y, um);
      for (int i = 0; i < d; ++i) jac[i * d + j] = (up[i] - um[i]) / (2.0 * step);
    }
    const double s = first_crossing(det_polynomial(jac, d), t);
    if (s >= 0.0) throw Error(ErrorKind::CharacteristicCrossing, "at t = " + format_double(s));
  }
}

struct Overlap {
  std::int64_t first = 0;
  std::vector<double> weight;
};

// Fractions of [a, b] falling in each cell of `axis`.
Overlap overlap(const Grid& g, int axis, double a, double b) {
  const double o = g.origin()[axis], h = g.spacing()[axis];
  const std::int64_t n = g.counts()[axis];
  const double tol = 1e-12 * h;
  if (a < o - tol || b > g.upper(axis) + tol) throw Error(ErrorKind::SupportReachedBoundary, "dust image left the box");
  Overlap out;
  if (b - a <= 0.0) {
    out.first = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((a - o) / h)), 0, n - 1);
    out.weight = {1.0};
    return out;
  }
  const std::int64_t i0 = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((a - o) / h)), 0, n - 1);
  const std::int64_t i1 = std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor((b - o) / h)), 0, n - 1);
  out.first = i0;
  for (std::int64_t i = i0; i <= i1; ++i) {
    const double lo = std::max(a, o + static_cast<double>(i) * h);
    const double hi = std::min(b, o + static_cast<double>(i + 1) * h);
    out.weight.push_back(std::max(0.0, hi - lo) / (b - a));
  }
  return out;
}

}  // namespace

FlowField dust_flow(const ScalarField& rho0, const VelocityField& u0, std::vector<double> times, int sub) {
  if (sub < 1) throw Error(ErrorKind::InvalidArgument, "sub must be >= 1");
  const Grid& g = rho0.grid;
  const int d = g.dim();
  for (double v : rho0.values) {
    if (v < 0.0) throw Error(ErrorKind::NotAdmissible, "negative initial density");
  }
  if (!times.empty()) check_crossing(rho0, u0, *std::max_element(times.begin(), times.end()));
  FlowField w(g, std::move(times));
  const double vol = g.cell_volume();
  int subs = 1;
  for (int i = 0; i < d; ++i) subs *= sub;
  std::vector<double> c(d), lo(d), hi(d), y(d), u(d), uc(d);
  std::vector<Overlap> ov(d);
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    const double t = w.times[k];
    std::vector<double> mass(static_cast<std::size_t>(g.cell_count()), 0.0);
    std::vector<double> mom(static_cast<std::size_t>(g.cell_count()) * d, 0.0);
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      if (rho0.values[cell] <= 0.0) continue;
      g.center(cell, c);
      const double m = rho0.values[cell] * vol / subs;
      for (int s = 0; s < subs; ++s) {
        int rest = s;
        for (int i = 0; i < d; ++i) {
          const int q = rest % sub;
          rest /= sub;
          const double h = g.spacing()[i] / sub;
          lo[i] = c[i] - 0.5 * g.spacing()[i] + q * h;
          hi[i] = lo[i] + h;
          y[i] = 0.5 * (lo[i] + hi[i]);
        }
        u0(y, uc);
        for (int i = 0; i < d; ++i) {
          std::vector<double> face = y;
          face[i] = lo[i];
          u0(face, u);
          const double a = lo[i] + t * u[i];
          face[i] = hi[i];
          u0(face, u);
          const double b = hi[i] + t * u[i];
          ov[i] = overlap(g, i, a, b);
        }
        // Tensor-product deposit over the overlapped cells.
        std::vector<std::size_t> pos(d, 0);
        while (true) {
          double wgt = 1.0;
          std::int64_t target = 0;
          for (int i = 0; i < d; ++i) {
            wgt *= ov[i].weight[pos[i]];
            target += (ov[i].first + static_cast<std::int64_t>(pos[i])) * g.stride(i);
          }
          if (wgt > 0.0) {
            mass[target] += wgt * m;
            for (int i = 0; i < d; ++i) mom[target * d + i] += wgt * m * uc[i];
          }
          int i = d - 1;
          while (i >= 0 && ++pos[i] == ov[i].weight.size()) {
            pos[i] = 0;
            --i;
          }
          if (i < 0) break;
        }
      }
    }
    auto& snap = w.snapshots[k];
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      snap.rho[cell] = mass[cell] / vol;
      if (mass[cell] > 0.0) {
        for (int i = 0; i < d; ++i) snap.u[cell * d + i] = mom[cell * d + i] / mass[cell];
      }
    }
  }
  w.apply_vacuum_convention();
  return w;
}

namespace {

struct Flux {
  double f[kMaxDim + 2];
  double speed;
};

Flux physical_flux(const double* uc, int d, int axis, double gamma, double floor) {
  Flux out{};
  const double rho = uc[0];
  const double re = std::max(rho, floor);
  double kinetic = 0.0;
  double vel[kMaxDim];
  for (int i = 0; i < d; ++i) {
    vel[i] = uc[1 + i] / re;
    kinetic += 0.5 * uc[1 + i] * vel[i];
  }
  const double energy = uc[d + 1];
  const double p = std::max(0.0, (gamma - 1.0) * (energy - kinetic));
  const double un = vel[axis];
  out.f[0] = uc[1 + axis];
  for (int i = 0; i < d; ++i) out.f[1 + i] = uc[1 + i] * un + (i == axis ? p : 0.0);
  out.f[d + 1] = (energy + p) * un;
  out.speed = rho > 0.0 ? std::abs(un) + std::sqrt(gamma * p / re) : 0.0;
  return out;
}

}  // namespace

FlowField fv_solve(const GasState& init, const SolverOptions& opt) {
  const Grid& g = init.grid;
  const int d = g.dim();
  if (d < 1 || d > 2) throw Error(ErrorKind::DimensionMismatch, "fv_solve supports d = 1, 2");
  if (!(opt.gamma > 1.0)) throw Error(ErrorKind::InvalidArgument, "gamma must be > 1");
  if (!(opt.cfl > 0.0 && opt.cfl <= 0.5)) throw Error(ErrorKind::InvalidArgument, "cfl must be in (0, 0.5]");
  if (!(opt.dt_out > 0.0) || !(opt.t_end >= 0.0)) throw Error(ErrorKind::InvalidArgument, "bad output times");
  const std::int64_t cells = g.cell_count();
  const int nq = d + 2;
  std::vector<double> u(static_cast<std::size_t>(cells) * nq, 0.0);
  double max_rho = 0.0;
  for (std::int64_t c = 0; c < cells; ++c) {
    const double rho = init.rho[c];
    if (rho < 0.0 || init.p[c] < 0.0) throw Error(ErrorKind::NotAdmissible, "negative initial state");
    u[c * nq] = rho;
    double kinetic = 0.0;
    for (int i = 0; i < d; ++i) {
      u[c * nq + 1 + i] = rho * init.u[c * d + i];
      kinetic += 0.5 * rho * init.u[c * d + i] * init.u[c * d + i];
    }
    u[c * nq + d + 1] = kinetic + init.p[c] / (opt.gamma - 1.0);
    max_rho = std::max(max_rho, rho);
  }
  const double floor = 1e-14 * max_rho;
  double max_energy = 0.0;
  for (std::int64_t c = 0; c < cells; ++c) max_energy = std::max(max_energy, u[c * nq + d + 1]);

  std::vector<double> times;
  for (std::int64_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * opt.dt_out;
    if (t > opt.t_end * (1.0 + 1e-12)) break;
    times.push_back(t);
  }
  FlowField w(g, times);
  auto record = [&](std::size_t k) {
    auto& s = w.snapshots[k];
    const double thr = 1e-12 * max_rho;
    for (std::int64_t c = 0; c < cells; ++c) {
      const double rho = u[c * nq];
      if (rho <= thr) continue;
      s.rho[c] = rho;
      double kinetic = 0.0;
      for (int i = 0; i < d; ++i) {
        s.u[c * d + i] = u[c * nq + 1 + i] / rho;
        kinetic += 0.5 * u[c * nq + 1 + i] * s.u[c * d + i];
      }
      const double eint = std::max(0.0, u[c * nq + d + 1] - kinetic);
      s.e[c] = eint / rho;
      s.p[c] = (opt.gamma - 1.0) * eint;
    }
  };
  record(0);

  std::vector<double> du(u.size());
  std::vector<std::int64_t> idx(d);
  double t = 0.0;
  std::size_t next = 1;
  long step = 0;
  while (next < times.size()) {
    std::vector<double> smax(d, 0.0);
    for (std::int64_t c = 0; c < cells; ++c) {
      if (u[c * nq] <= 0.0) continue;
      for (int a = 0; a < d; ++a) smax[a] = std::max(smax[a], physical_flux(&u[c * nq], d, a, opt.gamma, floor).speed);
    }
    double rate = 0.0;
    for (int a = 0; a < d; ++a) rate += smax[a] / g.spacing()[a];
    double dt = rate > 0.0 ? opt.cfl / rate : times[next] - t;
    bool hits = false;
    if (t + dt >= times[next] - 1e-12 * opt.dt_out) {
      dt = times[next] - t;
      hits = true;
    }
    std::fill(du.begin(), du.end(), 0.0);
    for (int a = 0; a < d; ++a) {
      const std::int64_t st = g.stride(a);
      const std::int64_t n = g.counts()[a];
      const double lam = dt / g.spacing()[a];
      for (std::int64_t c = 0; c < cells; ++c) {
        if ((c / st) % n == n - 1) continue;
        const std::int64_t r = c + st;
        const double* ul = &u[c * nq];
        const double* ur = &u[r * nq];
        if (ul[0] == 0.0 && ur[0] == 0.0 && ul[d + 1] == 0.0 && ur[d + 1] == 0.0) continue;
        const Flux fl = physical_flux(ul, d, a, opt.gamma, floor);
        const Flux fr = physical_flux(ur, d, a, opt.gamma, floor);
        const double s = std::max(fl.speed, fr.speed);
        for (int q = 0; q < nq; ++q) {
          const double f = 0.5 * (fl.f[q] + fr.f[q]) - 0.5 * s * (ur[q] - ul[q]);
          du[c * nq + q] -= lam * f;
          du[r * nq + q] += lam * f;
        }
      }
    }
    for (std::size_t q = 0; q < u.size(); ++q) u[q] += du[q];
    ++step;
    t = hits ? times[next] : t + dt;

    for (std::int64_t c = 0; c < cells; ++c) {
      const double rho = u[c * nq];
      double kinetic = 0.0;
      for (int i = 0; i < d; ++i) kinetic += rho > 0.0 ? 0.5 * u[c * nq + 1 + i] * u[c * nq + 1 + i] / rho : 0.0;
      if (rho < 0.0 || u[c * nq + d + 1] - kinetic < -1e-10 * max_energy) {
        throw Error(ErrorKind::NonPhysicalState, "step " + std::to_string(step) + " cell " + std::to_string(c));
      }
      g.unravel(c, idx);
      bool edge = false;
      for (int a = 0; a < d; ++a) edge = edge || idx[a] == 0 || idx[a] == g.counts()[a] - 1;
      if (edge && rho > 1e-12 * max_rho) {
        throw Error(ErrorKind::SupportReachedBoundary, "step " + std::to_string(step) + " t = " + format_double(t));
      }
    }
    if (hits) record(next++);
  }
  return w;
}

namespace {

Grid grid_from(const Config& c) {
  const int d = static_cast<int>(c.integer("d", 1));
  std::vector<double> cells = c.nums("cells");
  if (cells.size() == 1) cells.assign(d, cells[0]);
  std::vector<double> lo = c.nums("lo", std::vector<double>(d, -1.0));
  std::vector<double> hi = c.nums("hi", std::vector<double>(d, 1.0));
  if (lo.size() == 1) lo.assign(d, lo[0]);
  if (hi.size() == 1) hi.assign(d, hi[0]);
  if (static_cast<int>(cells.size()) != d || static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d) {
    throw Error(ErrorKind::DimensionMismatch, "cells/lo/hi must have d entries");
  }
  std::vector<std::int64_t> counts(d);
  for (int i = 0; i < d; ++i) counts[i] = static_cast<std::int64_t>(cells[i]);
  return Grid::box(lo, hi, counts);
}

std::vector<double> times_from(const Config& c) {
  const double t_end = c.num("t_end");
  const double dt = c.num("dt_out");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt_out must be > 0");
  std::vector<double> t;
  for (std::int64_t k = 0; static_cast<double>(k) * dt <= t_end * (1.0 + 1e-12); ++k) t.push_back(static_cast<double>(k) * dt);
  return t;
}

}  // namespace

GasState gas_initial(const Config& c) {
  GasState s;
  s.grid = grid_from(c);
  const Grid& g = s.grid;
  const int d = g.dim();
  const auto n = static_cast<std::size_t>(g.cell_count());
  s.rho.assign(n, 0.0);
  s.u.assign(n * d, 0.0);
  s.p.assign(n, 0.0);
  const std::string kind = c.str("init", "sod");
  std::vector<double> x(d);
  if (kind == "sod") {
    const double half = c.num("support", 0.25);
    const double split = c.num("split", 0.0);
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      g.center(cell, x);
      bool inside = true;
      for (int i = 0; i < d; ++i) inside = inside && std::abs(x[i]) < half;
      if (!inside) continue;
      const bool left = x[0] < split;
      s.rho[cell] = left ? c.num("rho_l", 1.0) : c.num("rho_r", 0.125);
      s.p[cell] = left ? c.num("p_l", 1.0) : c.num("p_r", 0.1);
    }
  } else if (kind == "bump") {
    const double radius = c.num("radius", 0.25);
    const std::vector<double> vel = c.nums("u", std::vector<double>(d, 0.0));
    if (static_cast<int>(vel.size()) != d) throw Error(ErrorKind::DimensionMismatch, "u must have d entries");
    for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
      g.center(cell, x);
      double r2 = 0.0;
      for (double v : x) r2 += v * v;
      if (r2 >= radius * radius) continue;
      s.rho[cell] = c.num("rho", 1.0);
      s.p[cell] = c.num("p", 0.0);
      for (int i = 0; i < d; ++i) s.u[cell * d + i] = vel[i];
    }
  } else {
    throw Error(ErrorKind::Format, "unknown init '" + kind + "'");
  }
  return s;
}

SolverOptions solver_options(const Config& c) {
  SolverOptions o;
  o.gamma = c.num("gamma", o.gamma);
  o.cfl = c.num("cfl", o.cfl);
  o.t_end = c.num("t_end", o.t_end);
  o.dt_out = c.num("dt_out", o.dt_out);
  return o;
}

FlowField dust_from_config(const Config& c) {
  const Grid g = grid_from(c);
  const int d = g.dim();
  const std::string kind = c.str("rho0", "gaussian");
  ScalarField rho0;
  if (kind == "gaussian") {
    rho0 = gaussian_profile(g, c.num("sigma", 0.2), 2.0);
    const double cut = c.num("cut", 1e-12);
    for (double& v : rho0.values) v = v < cut ? 0.0 : v * c.num("amplitude", 1.0);
  } else if (kind == "ball") {
    rho0 = ball_indicator(g, c.num("radius", 0.25));
  } else {
    throw Error(ErrorKind::Format, "unknown rho0 '" + kind + "'");
  }
  const std::string vel = c.str("u0", "linear");
  VelocityField u0;
  if (vel == "linear") {
    const double alpha = c.num("alpha", 0.5);
    u0 = [alpha](std::span<const double> y, std::span<double> u) {
      for (std::size_t i = 0; i < y.size(); ++i) u[i] = alpha * y[i];
    };
  } else if (vel == "constant") {
    const std::vector<double> cv = c.nums("c", std::vector<double>(d, 0.0));
    if (static_cast<int>(cv.size()) != d) throw Error(ErrorKind::DimensionMismatch, "c must have d entries");
    u0 = [cv](std::span<const double>, std::span<double> u) { std::copy(cv.begin(), cv.end(), u.begin()); };
  } else {
    throw Error(ErrorKind::Format, "unknown u0 '" + vel + "'");
  }
  return dust_flow(rho0, u0, times_from(c), static_cast<int>(c.integer("sub", 2)));
}

}  // namespace cilab
