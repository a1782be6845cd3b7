// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance [--strict] [--only N]
//
// Exit status is non-zero when a criterion fails that is not in kExpectedFailures;
// --strict makes every failure count.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cilab/campaign.hpp"
#include "cilab/config.hpp"
#include "cilab/divergence.hpp"
#include "cilab/error.hpp"
#include "cilab/families.hpp"
#include "cilab/flows.hpp"
#include "cilab/format.hpp"
#include "cilab/gas.hpp"
#include "cilab/kernel.hpp"
#include "cilab/parallel.hpp"
#include "cilab/scalar.hpp"
#include "cilab/sharpness.hpp"
#include "cilab/verify.hpp"

using namespace cilab;
using std::numbers::pi;

namespace {

// The boost check on the anchored pressure kernel cannot hold; see README.
const std::set<int> kExpectedFailures{8};

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!detail.empty()) detail += "; ";
    detail += what;
    if (!ok) {
      pass = false;
      detail += " [x]";
    }
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

TensorField smoothed_ball_field(int n, std::int64_t cells, double half, double radius) {
  const Grid g = Grid::cube(n, half, cells);
  TensorField a = smoothed_ball(g, radius, 2.0 * g.spacing()[0]).times_identity();
  a.mark_psd();
  return a;
}

Outcome mixed_det_cross_validation() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double polar = 0.0, diag = 0.0, trace = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const auto rows = mixed_det_check(n, 1000, 100 + n);
    polar = std::max(polar, rows[0].lhs);
    diag = std::max(diag, rows[1].lhs);
    trace = std::max(trace, rows[2].lhs);
  }
  const double secs = seconds_since(t0);
  o.require(polar <= 1e-10, "polarization vs oracle " + fmt("%.2e", polar));
  o.require(diag <= 1e-10, "diagonal " + fmt("%.2e", diag));
  o.require(trace <= 1e-10, "trace identity " + fmt("%.2e", trace));
  o.require(secs < 10.0, fmt("%.2f s", secs));
  return o;
}

Outcome garding_campaign() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  int violations = 0;
  double coincident = 0.0, worst = 0.0;
  for (int n = 2; n <= 5; ++n) {
    const auto rows = mixed_det_check(n, 10000, 200 + n);
    violations += std::stoi(rows[3].get("violations"));
    coincident = std::max(coincident, std::stod(rows[3].get("coincident_gap")));
    worst = std::max(worst, rows[3].lhs);
  }
  const double secs = seconds_since(t0);
  o.require(violations == 0, "violations " + std::to_string(violations));
  o.require(coincident <= 1e-10, "coincident gap " + fmt("%.2e", coincident));
  o.detail += "; max lhs/rhs " + fmt("%.4f", worst);
  o.require(secs < 30.0, fmt("%.2f s", secs));
  return o;
}

Outcome schur_identities() {
  Outcome o;
  const auto rows = schur_check(10000, 300);
  o.require(rows[0].lhs <= 1e-10, "det A = rho det S " + fmt("%.2e", rows[0].lhs));
  o.require(rows[1].lhs <= 1e-10, "euler Schur = pI " + fmt("%.2e", rows[1].lhs));
  return o;
}

Outcome isoperimetric_anchor() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const double c2 = 1.0 / (4.0 * pi), c3 = 1.0 / (6.0 * std::sqrt(pi));
  const double r2 = verify_fund(smoothed_ball_field(2, 256, 1.5, 1.0)).ratio;
  const double r3 = verify_fund(smoothed_ball_field(3, 96, 1.5, 1.0)).ratio;
  o.require(rel(r2, c2) <= 0.03, "n=2 ratio/c " + fmt("%.4f", r2 / c2));
  o.require(rel(r3, c3) <= 0.05, "n=3 ratio/c " + fmt("%.4f", r3 / c3));
  ProbeSetup s;
  s.cells = 256;
  s.budget = 24;
  const ProbeResult p = probe(s);
  o.require(p.found && rel(p.best_ratio, c2) <= 0.03, "probe best/c " + fmt("%.4f", p.best_ratio / c2));
  const double secs = seconds_since(t0);
  o.require(secs < 120.0, fmt("%.1f s", secs));
  return o;
}

double extreme_mass(int n, std::int64_t cells) {
  KernelSpec k = KernelSpec::inverse_r(std::vector<double>(static_cast<std::size_t>(n), 0.0));
  k.cutoff_radius = 4.0;
  return divergence(extreme_tensor(Grid::cube(n, 1.0, cells), k)).total_mass();
}

Outcome extreme_tensor_mass() {
  Outcome o;
  const double s1 = 2.0 * pi, s2 = 4.0 * pi;
  const double m128 = extreme_mass(2, 128), m256 = extreme_mass(2, 256);
  const double m48 = extreme_mass(3, 48), m96 = extreme_mass(3, 96);
  const double order2 = std::log2(rel(m128, s1) / rel(m256, s1));
  const double order3 = std::log2(rel(m48, s2) / rel(m96, s2));
  o.require(rel(m256, s1) <= 0.02, "n=2 mass/|S1| " + fmt("%.5f", m256 / s1));
  o.require(rel(m96, s2) <= 0.04, "n=3 mass/|S2| " + fmt("%.5f", m96 / s2));
  o.require(order2 >= 1.0, "n=2 order " + fmt("%.2f", order2));
  o.require(order3 >= 1.0, "n=3 order " + fmt("%.2f", order3));
  return o;
}

Outcome bv_convolution_anchor() {
  Outcome o;
  const ScalarField ball = ball_indicator(Grid::cube(2, 1.5, 256), 1.0);
  const Report plain = conv_ratio(ball);
  o.require(rel(plain.ratio, 1.0) <= 0.03, "ratio " + fmt("%.4f", plain.ratio));
  const Report one = conv_kernel_bound(ball, SphereProfile::constant(2, 1.0));
  o.require(one.lhs == plain.lhs, "g=1 lhs identical");
  const double scaled = rel(one.ratio * 2.0 * pi, plain.ratio);
  o.require(scaled <= 1e-12, "g=1 ratio x |S1| " + fmt("%.2e", scaled));
  return o;
}

ScalarField dilated(const ScalarField& f, double lambda, double value_scale) {
  std::vector<double> origin = f.grid.origin(), spacing = f.grid.spacing();
  for (auto& v : origin) v *= lambda;
  for (auto& v : spacing) v *= lambda;
  ScalarField out(Grid(origin, spacing, f.grid.counts()));
  for (std::size_t c = 0; c < f.values.size(); ++c) out.values[c] = f.values[c] * value_scale;
  return out;
}

Outcome gagliardo() {
  Outcome o;
  const Grid line = Grid::cube(1, 2.0, 400);
  const std::vector<ScalarField> classic{
      gaussian_profile(line, 0.5, 2.0),
      ScalarField::from_function(line, [](std::span<const double> y) { return y[0] > -0.3 && y[0] < 1.1 ? 1.0 : 0.0; })};
  const Report c = gagliardo_classic(classic);
  o.require(rel(c.ratio, 1.0) <= 1e-3, "d=2 classic ratio " + fmt("%.12f", c.ratio));

  const ScalarField bump = gaussian_profile(Grid::cube(2, 1.5, 64), 0.5, 2.0, std::vector<double>{0.3, 0.0});
  const std::vector<ScalarField> fs{bump, bump};
  const std::vector<ScalarField> gs{dilated(bump, 2.0, 0.5), dilated(bump, 2.0, 0.5)};
  const double base = gagliardo_time(fs).ratio, scaled = gagliardo_time(gs).ratio;
  o.require(rel(scaled, base) <= 1e-4, "time form dilation " + fmt("%.2e", rel(scaled, base)));
  return o;
}

Config sod_config() {
  return Config::parse(
      "d = 1\ncells = 1024\nlo = -2\nhi = 2\ninit = sod\nsupport = 0.25\ngamma = 1.4\ncfl = 0.4\n"
      "t_end = 0.078125\ndt_out = 0.00390625\n");
}

FlowField sod(double cfl) {
  Config c = sod_config();
  c.set("cfl", format_double(cfl));
  return fv_solve(gas_initial(c), solver_options(c));
}

constexpr double kShift = 0.125;
constexpr double kTau = 0.5 * 0.078125;

struct GasRatios {
  Report pgd, estuu, schurp;
};

GasRatios gas_ratios(const FlowField& w, double length_scale, std::span<const double> eta) {
  return {functional_pgd(w), functional_estuu(w, ShiftSet::from({{kShift * length_scale}})),
          functional_schurp(w, kTau, eta)};
}

Outcome gas_invariance() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const FlowField w = sod(0.4);
  const std::vector<double> eta{0.0};
  const GasRatios base = gas_ratios(w, 1.0, eta);
  const Report* rows[3] = {&base.pgd, &base.estuu, &base.schurp};
  const char* names[3] = {"pgd", "estuu", "schurp"};
  bool finite = true;
  for (const Report* r : rows) finite = finite && std::isfinite(r->ratio) && r->ratio > 0.0;
  o.require(finite, "finite " + fmt("%.5f", base.pgd.ratio) + "," + fmt("%.5f", base.estuu.ratio) + "," +
                        fmt("%.5f", base.schurp.ratio));

  const GasRatios half = gas_ratios(sod(0.2), 1.0, eta);
  const Report* hrows[3] = {&half.pgd, &half.estuu, &half.schurp};
  for (int i = 0; i < 3; ++i) {
    o.require(rel(hrows[i]->ratio, rows[i]->ratio) <= 0.02,
              std::string(names[i]) + " dt/2 " + fmt("%.2e", rel(hrows[i]->ratio, rows[i]->ratio)));
  }

  double scaling = 0.0;
  for (double mu : {0.5, 2.0}) {
    const std::vector<double> meta{mu * eta[0]};
    const GasRatios s = gas_ratios(scaling_transform(w, mu), mu, meta);
    const Report* srows[3] = {&s.pgd, &s.estuu, &s.schurp};
    for (int i = 0; i < 3; ++i) scaling = std::max(scaling, rel(srows[i]->ratio, rows[i]->ratio));
  }
  o.require(scaling <= 1e-6, "scaling " + fmt("%.2e", scaling));

  // One cell per output interval, so the boosted flow is resampled exactly.
  const double speed = w.grid.spacing()[0] / (w.times[1] - w.times[0]);
  const FlowField b = galilean_boost(w, std::vector<double>{speed});
  const std::vector<double> moved{eta[0] + kTau * speed};
  const GasRatios g = gas_ratios(b, 1.0, moved);
  const Report* grows[3] = {&g.pgd, &g.estuu, &g.schurp};
  for (int i = 0; i < 3; ++i) {
    const double before = std::stod(rows[i]->get("ratio_galilean"));
    const double after = std::stod(grows[i]->get("ratio_galilean"));
    o.require(rel(after, before) <= 1e-6, std::string(names[i]) + " boost " + fmt("%.2e", rel(after, before)));
  }
  const double secs = seconds_since(t0);
  o.require(secs < 180.0, fmt("%.1f s", secs));
  return o;
}

Outcome direct_vs_ci() {
  Outcome o;
  const FlowField w = sod(0.4);
  const auto rows = direct_bound(w, -1, {});
  const Report e = functional_estuu(w, ShiftSet::from({{kShift}}));
  o.require(rows.size() == 2 && std::isfinite(rows[0].ratio) && std::isfinite(rows[1].ratio),
            "direct " + fmt("%.4f", rows[0].ratio) + ", direct-ci " + fmt("%.4f", rows[1].ratio));
  o.require(std::isfinite(e.ratio), "estuu " + fmt("%.4f", e.ratio));
  const Report id = cor_identity_check(10000, 900);
  o.require(id.lhs <= 1e-9, "Cor identity " + fmt("%.2e", id.lhs));
  return o;
}

double blob_ratio(std::int64_t cells, Outcome* o) {
  const Grid g = Grid::cube(2, 1.5, cells);
  std::vector<double> times;
  for (int k = 0; k <= 4; ++k) times.push_back(0.1 * k);
  const FlowField w = cooling_flow(g, times, 0.6, 1.0, 0.4);
  const std::vector<double> eta{0.0, 0.0};
  const double tau = 0.2;
  if (o != nullptr) {
    DefectField zero{g, w.times, {}};
    for (std::size_t k = 0; k < w.times.size(); ++k) {
      TensorField s(g, 2);
      s.mark_psd();
      zero.sigma.push_back(s);
    }
    o->require(functional_defect(w, zero, tau, eta).lhs == 0.0, "zero sigma gives 0");
    const DefectField flat = gaussian_blob_defect(w, 0.5, 0.4, eta, true);
    o->require(functional_defect(w, flat, tau, eta).lhs == 0.0, "rank-deficient sigma gives 0");
  }
  const Report r = functional_defect(w, gaussian_blob_defect(w, 0.5, 0.4, eta), tau, eta);
  return r.status == Status::ok() ? r.ratio : std::nan("");
}

Outcome defect() {
  Outcome o;
  const double coarse = blob_ratio(64, &o);
  const double fine = blob_ratio(128, nullptr);
  o.require(std::isfinite(coarse) && std::isfinite(fine) && rel(fine, coarse) <= 0.02,
            "blob 64 vs 128 " + fmt("%.5f", coarse) + " vs " + fmt("%.5f", fine));
  return o;
}

std::string campaign_csv() {
  std::vector<Report> rows = mixed_det_check(3, 200, 7);
  const auto schur = schur_check(200, 8);
  rows.insert(rows.end(), schur.begin(), schur.end());
  rows.push_back(cor_identity_check(200, 9));
  rows.push_back(verify_fund(smoothed_ball_field(2, 128, 1.5, 1.0)));
  rows.push_back(conv_ratio(ball_indicator(Grid::cube(2, 1.5, 128), 1.0)));
  const FlowField w = sod(0.4);
  const GasRatios g = gas_ratios(w, 1.0, std::vector<double>{0.0});
  rows.push_back(g.pgd);
  rows.push_back(g.estuu);
  rows.push_back(g.schurp);
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

Outcome determinism() {
  Outcome o;
  set_summation(Summation::Deterministic);
  const std::string a = campaign_csv();
  const std::string b = campaign_csv();
  set_summation(Summation::Fast);
  o.require(a == b, "rerun byte-identical (" + std::to_string(a.size()) + " bytes)");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  bool strict = false;
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--strict") == 0) {
      strict = true;
    } else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--strict] [--only N]\n", argv[0]);
      return 1;
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"mixed-determinant cross-validation", mixed_det_cross_validation},
      {"Garding campaign", garding_campaign},
      {"Schur identities", schur_identities},
      {"isoperimetric anchor", isoperimetric_anchor},
      {"extreme tensor", extreme_tensor_mass},
      {"BV convolution anchor", bv_convolution_anchor},
      {"Gagliardo", gagliardo},
      {"gas invariance", gas_invariance},
      {"direct vs compensated", direct_vs_ci},
      {"defect functional", defect},
      {"determinism", determinism},
  };
  int unexpected = 0, failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (only != 0 && id != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    const bool expected = kExpectedFailures.count(id) != 0;
    std::printf("criterion %2d %-36s %s  %s\n", id, criteria[i].first,
                o.pass ? "PASS" : (expected ? "FAIL (expected)" : "FAIL"), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) {
      ++failed;
      if (strict || !expected) ++unexpected;
    }
  }
  std::printf("%d failed, %d unexpected\n", failed, unexpected);
  return unexpected == 0 ? 0 : 1;
}
