#include "cilab/campaign.hpp"

#include <algorithm>
#include <cmath>

#include "cilab/error.hpp"
#include "cilab/mixed_det.hpp"

namespace cilab {

namespace {

double normwise(double a, double b, double scale) { return std::abs(a - b) / std::max(std::abs(b), scale); }

double norm_product(std::span<const SymMat> ms) {
  double s = 1.0;
  for (const auto& m : ms) s *= m.frobenius_norm();
  return s;
}

Report error_row(const char* id, double worst, int n, int samples) {
  Report r = Report::make(id, worst, 1.0);
  r.grid = "n=" + std::to_string(n);
  r.add("samples", static_cast<double>(samples));
  return r;
}

}  // namespace

SymMat random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  SymMat m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m(i, j) = nd(rng);
  }
  return m;
}

SymMat random_psd(int n, std::mt19937_64& rng, int rank) {
  if (rank < 0) rank = n;
  std::normal_distribution<double> nd;
  SymMat m(n);
  std::vector<double> col(static_cast<std::size_t>(n));
  for (int k = 0; k < rank; ++k) {
    for (auto& v : col) v = nd(rng);
    m += SymMat::outer(col);
  }
  return m;
}

std::vector<Report> mixed_det_check(int n, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double polar = 0.0, diag = 0.0, trace = 0.0, garding = 0.0, upper = 0.0, coincident = 0.0;
  int violations = 0, upper_violations = 0;
  for (int s = 0; s < samples; ++s) {
    std::vector<SymMat> ms;
    for (int j = 0; j < n; ++j) ms.push_back(random_symmetric(n, rng));
    const double scale = norm_product(ms);
    polar = std::max(polar, normwise(mixed_det(ms), mixed_det_oracle(ms), scale));

    const SymMat m = ms[0];
    std::vector<SymMat> same(static_cast<std::size_t>(n), m);
    diag = std::max(diag, normwise(mixed_det(same), det(m), norm_product(same)));

    std::vector<SymMat> one_off = same;
    one_off[0] = ms[1];
    trace = std::max(trace, normwise(mixed_det_one_off(ms[1], m), mixed_det(one_off), norm_product(one_off)));

    std::vector<SymMat> ps;
    for (int j = 0; j < n; ++j) ps.push_back(random_psd(n, rng));
    const InequalitySides g = garding_gap(ps);
    if (!g.holds()) ++violations;
    if (g.rhs > 0.0) garding = std::max(garding, g.lhs / g.rhs);
    const InequalitySides u = multilinear_upper(ps);
    if (!u.holds()) ++upper_violations;
    if (u.rhs > 0.0) upper = std::max(upper, u.lhs / u.rhs);

    std::vector<SymMat> equal(static_cast<std::size_t>(n), ps[0]);
    const InequalitySides e = garding_gap(equal);
    coincident = std::max(coincident, normwise(e.lhs, e.rhs, norm_product(equal)));
  }
  std::vector<Report> out;
  out.push_back(error_row("polarization", polar, n, samples));
  out.push_back(error_row("diagonal", diag, n, samples));
  out.push_back(error_row("trace-identity", trace, n, samples));
  Report g = Report::make("garding", garding, 1.0);
  g.grid = "n=" + std::to_string(n);
  g.add("samples", static_cast<double>(samples));
  g.add("violations", static_cast<double>(violations));
  g.add("coincident_gap", coincident);
  out.push_back(g);
  Report u = Report::make("multilinear-upper", upper, 1.0);
  u.grid = g.grid;
  u.add("samples", static_cast<double>(samples));
  u.add("violations", static_cast<double>(upper_violations));
  out.push_back(u);
  return out;
}

std::vector<Report> schur_check(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  std::normal_distribution<double> nd;
  double block = 0.0, euler = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 2 + s % 5;
    SymMat a = random_psd(n, rng);
    a += SymMat::identity(n) * 1e-3;
    const SchurResult sr = schur_complement(a);
    block = std::max(block, normwise(sr.rho * det(sr.s), det(a), std::pow(a.frobenius_norm(), n)));

    const int d = 1 + s % 3;
    std::vector<double> u(static_cast<std::size_t>(d));
    for (auto& v : u) v = nd(rng);
    const double rho = pos(rng), p = pos(rng);
    const SchurResult es = schur_complement(euler_state(rho, u, p));
    double dev = 0.0;
    for (int i = 0; i < d; ++i) {
      for (int j = i; j < d; ++j) dev = std::max(dev, std::abs(es.s(i, j) - (i == j ? p : 0.0)));
    }
    euler = std::max(euler, dev / p);
  }
  Report b = error_row("schur-block", block, 0, samples);
  b.grid = "n=2..6";
  Report e = error_row("schur-euler", euler, 0, samples);
  e.grid = "d=1..3";
  return {b, e};
}

Report cor_identity_check(int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  std::normal_distribution<double> nd;
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int d = 1 + s % 3;
    SymMat sum(d + 1);
    double prod = 1.0, scale = 1.0;
    std::vector<std::vector<double>> us;
    for (int j = 0; j <= d; ++j) {
      std::vector<double> u(static_cast<std::size_t>(d));
      for (auto& v : u) v = nd(rng);
      const double rho = pos(rng);
      const SymMat term = rank_one(rho, u);
      sum += term;
      scale *= term.frobenius_norm();
      prod *= rho;
      us.push_back(std::move(u));
    }
    const double c = cor(us);
    worst = std::max(worst, normwise(prod * c * c, det(sum), scale));
  }
  Report r = error_row("cor-identity", worst, 0, samples);
  r.grid = "d=1..3";
  return r;
}

FlowField cooling_flow(const Grid& g, std::vector<double> times, double width, double e0, double cooling) {
  if (times.empty() || !(width > 0.0) || !(e0 > 0.0) || cooling < 0.0 || cooling >= 1.0) {
    throw Error(ErrorKind::InvalidArgument, "cooling_flow parameters");
  }
  FlowField w(g, std::move(times));
  const double t_end = w.times.back() > 0.0 ? w.times.back() : 1.0;
  const double gamma = 1.4;
  std::vector<double> y(static_cast<std::size_t>(g.dim()));
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    const double e = e0 * (1.0 - cooling * w.times[k] / t_end);
    auto& s = w.snapshots[k];
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
      g.center(c, y);
      double r2 = 0.0;
      for (double v : y) r2 += v * v;
      const double rho = std::exp(-r2 / (width * width));
      s.rho[c] = rho;
      s.e[c] = e;
      s.p[c] = (gamma - 1.0) * rho * e;
    }
  }
  return w;
}

DefectField gaussian_blob_defect(const FlowField& w, double fraction, double width, std::span<const double> center,
                                 bool rank_one) {
  const int d = w.d();
  if (static_cast<int>(center.size()) != d) throw Error(ErrorKind::DimensionMismatch, "blob centre");
  const FlowSummary sum = summary(w);
  const Grid& g = w.grid;
  ScalarField blob(g);
  std::vector<double> y(static_cast<std::size_t>(d));
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    g.center(c, y);
    double r2 = 0.0;
    for (int i = 0; i < d; ++i) r2 += (y[i] - center[i]) * (y[i] - center[i]);
    blob.values[c] = std::exp(-r2 / (width * width));
  }
  const double trace_unit = blob.integral() * (rank_one ? 1.0 : d);
  SymMat shape = SymMat::identity(d);
  if (rank_one) {
    std::vector<double> e0(static_cast<std::size_t>(d), 0.0);
    e0[0] = 1.0;
    shape = SymMat::outer(e0);
  }
  DefectField out;
  out.grid = g;
  out.times = w.times;
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    const double lost = std::max(0.0, sum.E0 - sum.energy[k]);
    const double amp = trace_unit > 0.0 ? 2.0 * fraction * lost / trace_unit : 0.0;
    TensorField s(g, d);
    for (std::int64_t c = 0; c < g.cell_count(); ++c) s.set(c, shape * (amp * blob.values[c]));
    s.mark_psd();
    out.sigma.push_back(std::move(s));
  }
  return out;
}

}  // namespace cilab
