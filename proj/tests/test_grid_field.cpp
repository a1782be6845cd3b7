#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "cilab/divergence.hpp"
#include "cilab/error.hpp"
#include "cilab/families.hpp"
#include "cilab/field.hpp"
#include "cilab/grid.hpp"
#include "cilab/kernel.hpp"
#include "cilab/mixed_det.hpp"
#include "cilab/verify.hpp"
#include "oracles.hpp"

using namespace cilab;
using std::numbers::pi;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::Format;
}

TensorField ball_field(int n, std::int64_t cells, double half, double radius) {
  const Grid g = Grid::cube(n, half, cells);
  return smoothed_ball(g, radius, 2.0 * g.spacing()[0]).times_identity();
}

// A(x) = D A(D^{-1} x) D / det D on the grid stretched by D.
TensorField stretch(const TensorField& a, const std::vector<double>& mu) {
  const Grid& g = a.grid();
  std::vector<double> origin = g.origin(), spacing = g.spacing();
  double detd = 1.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    origin[i] *= mu[i];
    spacing[i] *= mu[i];
    detd *= mu[i];
  }
  TensorField out(Grid(origin, spacing, g.counts()), a.dim());
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    out.set(c, a.at(c).congruence_diag(mu) * (1.0 / detd));
  }
  out.mark_psd();
  return out;
}

}  // namespace

TEST_CASE("grid indexing and dual lattice") {
  const Grid g = Grid::cube(3, 1.0, 8);
  CHECK(g.cell_count() == 512);
  CHECK(g.cell_volume() == doctest::Approx(0.25 * 0.25 * 0.25));
  std::vector<std::int64_t> idx(3);
  for (std::int64_t c : {0L, 7L, 100L, 511L}) {
    g.unravel(c, idx);
    CHECK(g.ravel(idx) == c);
  }
  g.unravel(1, idx);
  CHECK(idx[2] == 1);
  const auto corner = g.snap_to_dual(std::vector<double>{0.1, -0.2, 0.9});
  CHECK(corner[0] == doctest::Approx(0.0));
  CHECK(corner[1] == doctest::Approx(-0.25));
  CHECK(corner[2] == doctest::Approx(1.0));
  CHECK(g.on_node(g.center(3)));
  CHECK_FALSE(g.on_node(corner));
}

TEST_CASE("grid rejects non-positive spacing and oversized grids") {
  CHECK_THROWS_AS(Grid({0.0}, {0.0}, {4}), Error);
  const auto old = Grid::cell_budget();
  Grid::set_cell_budget(100);
  CHECK(kind_of([] { Grid::cube(2, 1.0, 11); }) == ErrorKind::GridTooLarge);
  Grid::set_cell_budget(old);
}

TEST_CASE("divergence of zero and of the box indicator") {
  const Grid g = Grid::cube(2, 1.0, 16);
  const TensorField zero(g, 2);
  CHECK(divergence(zero).total_mass() == 0.0);

  const TensorField box = ScalarField::from_function(g, [](auto) { return 1.0; }).times_identity();
  const DivMeasure d = divergence(box);
  CHECK(d.interior_mass() == doctest::Approx(0.0));
  CHECK(d.sheet_mass() == doctest::Approx(8.0));

  const Grid g3 = Grid::box(std::vector<double>{0, 0, 0}, std::vector<double>{1, 2, 3},
                            std::vector<std::int64_t>{4, 6, 8});
  const TensorField box3 = ScalarField::from_function(g3, [](auto) { return 1.0; }).times_identity();
  CHECK(divergence(box3).total_mass() == doctest::Approx(2.0 * (1 * 2 + 2 * 3 + 1 * 3)));
}

TEST_CASE("divergence is exact on linear fields") {
  // A = [[x, y], [y, 0]]: row 0 has divergence 2, row 1 has divergence 0.
  const Grid g = Grid::cube(2, 1.0, 20);
  const TensorField a = TensorField::from_function(g, 2, [](std::span<const double> p) {
    SymMat m(2);
    m(0, 0) = p[0];
    m(0, 1) = p[1];
    return m;
  });
  const DivMeasure d = divergence(a);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    CHECK(d.interior(c)[0] == doctest::Approx(2.0 * g.cell_volume()));
    CHECK(d.interior(c)[1] == doctest::Approx(0.0));
  }
  CHECK(d.interior_mass() == doctest::Approx(2.0 * 4.0));
}

TEST_CASE("row and directional masses") {
  const TensorField a = ball_field(2, 64, 1.5, 1.0);
  const DivMeasure d = divergence(a);
  CHECK(d.row_mass(0) == doctest::Approx(d.row_mass(1)).epsilon(1e-12));
  CHECK(d.directional_mass(std::vector<double>{1.0, 0.0}) == doctest::Approx(d.row_mass(0)));
  CHECK(d.row_mass(0) <= d.total_mass());
}

TEST_CASE("integral_det_root") {
  const Grid g = Grid::cube(2, 1.5, 128);
  const ScalarField f = ball_indicator(g, 1.0);
  const TensorField disk = f.times_identity();
  double squares = 0.0;
  for (double v : f.values) squares += v * v * g.cell_volume();
  CHECK(integral_det_root(disk).value == doctest::Approx(squares).epsilon(1e-12));
  CHECK(integral_det_root(disk).value == doctest::Approx(pi).epsilon(0.01));
  TensorField zero(g, 2);
  zero.mark_psd();
  CHECK(integral_det_root(zero).value == 0.0);
  CHECK(kind_of([&] { integral_det_root(TensorField(g, 2)); }) == ErrorKind::NotPSDField);
}

TEST_CASE("integral_det_root scales like lambda^n under dilation") {
  const Grid g = Grid::cube(2, 1.5, 64);
  const Grid gl = Grid::cube(2, 3.0, 64);
  const TensorField a = smoothed_ball(g, 1.0, 0.1).times_identity();
  const TensorField b = smoothed_ball(gl, 2.0, 0.2).times_identity();
  CHECK(integral_det_root(b).value == doctest::Approx(4.0 * integral_det_root(a).value).epsilon(1e-12));
}

TEST_CASE("verify_fund") {
  const Grid g = Grid::cube(2, 1.5, 32);
  TensorField zero(g, 2);
  zero.mark_psd();
  CHECK(verify_fund(zero).ratio == 0.0);

  const Report disk = verify_fund(ball_field(2, 128, 1.5, 1.0));
  CHECK(disk.ratio == doctest::Approx(1.0 / (4.0 * pi)).epsilon(0.04));
  CHECK(disk.ratio < 1.0 / (4.0 * pi));
  CHECK(disk.estimate == "fund");

  const Grid ge = Grid::cube(2, 1.5, 128);
  const std::vector<double> axes{1.0, 0.5};
  const Report ellipse = verify_fund(smoothed_ellipsoid(ge, axes, 2.0 * ge.spacing()[0]).times_identity());
  CHECK(ellipse.ratio < disk.ratio);
}

TEST_CASE("property: dilation leaves verify ratios invariant") {
  const TensorField a = ball_field(2, 64, 1.5, 0.8);
  const Report base = verify_fund(a);
  const TensorField b = stretch(a, {2.5, 2.5});
  CHECK(verify_fund(b).ratio == doctest::Approx(base.ratio).epsilon(1e-6));
}

TEST_CASE("verify_prod") {
  const TensorField a = ball_field(2, 64, 1.5, 0.8);
  const Report p = verify_prod(a);
  CHECK(p.get("prod_le_fund") == "1");
  CHECK(p.get("fund_le_scaled_prod") == "1");
  const DivMeasure d = divergence(a);
  CHECK(p.rhs_scale == doctest::Approx(d.row_mass(0) * d.row_mass(1)));

  TensorField zero(a.grid(), 2);
  zero.mark_psd();
  CHECK(kind_of([&] { verify_prod(zero); }) == ErrorKind::ZeroRowMass);

  const TensorField s = stretch(a, {2.0, 0.5});
  CHECK(verify_prod(s).ratio == doctest::Approx(p.ratio).epsilon(1e-6));
}

TEST_CASE("log_avg_direction") {
  const TensorField a = ball_field(2, 64, 1.5, 0.8);
  const DirectionalAverage avg = log_avg_direction(a, 400, 3);
  const double e1 = divergence(a).directional_mass(std::vector<double>{1.0, 0.0});
  CHECK(avg.estimate == doctest::Approx(e1).epsilon(0.05));
  CHECK(avg.used == 400);
  CHECK(integral_det_root(a).value <= avg.rhs_scale);

  const DirectionalAverage small = log_avg_direction(a, 100, 5);
  const DirectionalAverage large = log_avg_direction(a, 1000, 5);
  const double shrink = small.std_error / large.std_error;
  CHECK(shrink > std::sqrt(10.0) / 1.6);
  CHECK(shrink < std::sqrt(10.0) * 1.6);
}

TEST_CASE("verify_mulest") {
  const TensorField a = ball_field(2, 64, 1.5, 0.8);
  const std::vector<TensorField> same{a, a};
  const Report m = verify_mulest(same);
  const Report f = verify_fund(a);
  CHECK(m.lhs == doctest::Approx(f.lhs).epsilon(1e-12));
  CHECK(m.rhs_scale == doctest::Approx(f.rhs_scale).epsilon(1e-12));

  const Grid g = a.grid();
  TensorField shifted = smoothed_ball(g, 0.8, 2.0 * g.spacing()[0], std::vector<double>{0.3, 0.0}).times_identity();
  const std::vector<TensorField> pair{a, shifted};
  const Report mixed = verify_mulest(pair);
  CHECK(std::isfinite(mixed.ratio));
  CHECK(mixed.ratio > 0.0);

  const std::vector<TensorField> bad{a, ball_field(2, 32, 1.5, 0.8)};
  CHECK(kind_of([&] { verify_mulest(bad); }) == ErrorKind::GridMismatch);
}

TEST_CASE("verify_mulest with an extreme tensor reproduces f^(n-1) phi / (n r^(n-1))") {
  const Grid g = Grid::cube(2, 1.5, 64);
  KernelSpec k = KernelSpec::inverse_r({0.0, 0.0});
  k.cutoff_radius = 10.0;
  const TensorField f = extreme_tensor(g, k);
  const ScalarField bump = smoothed_ball(g, 0.8, 0.1);
  const TensorField b = bump.times_identity();
  std::vector<double> x(2);
  for (std::int64_t c = 0; c < g.cell_count(); c += 97) {
    g.center(c, x);
    const double r = std::hypot(x[0], x[1]);
    const std::vector<SymMat> args{f.at(c), b.at(c)};
    CHECK(mixed_det(args) == doctest::Approx(bump.values[c] / (2.0 * r)).epsilon(1e-10));
  }
}

TEST_CASE("extreme tensor") {
  const Grid g = Grid::cube(2, 1.0, 128);
  KernelSpec k = KernelSpec::inverse_r({0.0, 0.0});
  k.cutoff_radius = 4.0;
  const TensorField f = extreme_tensor(g, k);
  CHECK(f.psd_flag());
  for (std::int64_t c = 0; c < g.cell_count(); c += 31) {
    const SymMat m = f.at(c);
    CHECK(std::abs(det(m)) <= 1e-12 * std::max(1.0, m.frobenius_norm() * m.frobenius_norm()));
  }
  const DivMeasure d = divergence(f);
  CHECK(d.total_mass() == doctest::Approx(2.0 * pi).epsilon(0.02));

  const Grid coarse = Grid::cube(2, 1.0, 64);
  const DivMeasure dc = divergence(extreme_tensor(coarse, k));
  CHECK(std::abs(d.total_mass() - 2 * pi) < std::abs(dc.total_mass() - 2 * pi));
  CHECK(d.interior_mass() < dc.interior_mass());

  const Grid odd = Grid::cube(2, 1.0, 65);
  CHECK(kind_of([&] { extreme_tensor(odd, k); }) == ErrorKind::SingularOnNode);
}

TEST_CASE("schur kernel functional") {
  const TensorField a = ball_field(2, 64, 1.5, 0.8);
  TensorField zero(a.grid(), 2);
  zero.mark_psd();
  const KernelSpec centre = KernelSpec::schur({0.0, 0.0}, {1.0, 0.0});
  CHECK(schur_kernel_functional(zero, centre) == 0.0);

  const double near = schur_kernel_functional(a, centre);
  const double far = schur_kernel_functional(a, KernelSpec::schur({1.4, 1.4}, {1.0, 0.0}));
  CHECK(near > 0.0);
  CHECK(far < near);

  const Report r = verify_schur(a, centre);
  CHECK(r.lhs == near);
  CHECK(r.rhs_scale == doctest::Approx(divergence(a).total_mass()));
}

TEST_CASE("schur kernel functional is invariant under a joint quarter turn") {
  // Quarter turn R(x, y) = (-y, x); the grid is mapped onto itself.
  const Grid g = Grid::cube(2, 1.5, 48);
  TensorField skew = TensorField::from_function(g, 2, [](std::span<const double> p) {
    const double f = std::exp(-4.0 * (p[0] * p[0] + 2.0 * p[1] * p[1]));
    SymMat m(2);
    m(0, 0) = 2.0 * f;
    m(0, 1) = 0.5 * f;
    m(1, 1) = f;
    return m;
  });
  skew.mark_psd();
  TensorField rotated(g, 2);
  std::vector<std::int64_t> idx(2), src(2);
  const auto n = g.counts()[0];
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    g.unravel(c, idx);
    // cell at R p comes from p = R^{-1}(x, y) = (y, -x)
    src[0] = idx[1];
    src[1] = n - 1 - idx[0];
    const SymMat m = skew.at(g.ravel(src));
    SymMat r(2);
    r(0, 0) = m(1, 1);
    r(1, 1) = m(0, 0);
    r(0, 1) = -m(0, 1);
    rotated.set(c, r);
  }
  rotated.mark_psd();
  const double before = schur_kernel_functional(skew, KernelSpec::schur({0.25, -0.5}, {1.0, 0.0}));
  const double after = schur_kernel_functional(rotated, KernelSpec::schur({0.5, 0.25}, {0.0, 1.0}));
  CHECK(after == doctest::Approx(before).epsilon(1e-12));
}

TEST_CASE("sigma schur functional") {
  const Grid g = Grid::cube(3, 1.5, 16);
  TensorField k(g, 3);
  k.mark_psd();
  TensorField zero(g, 2);
  zero.mark_psd();
  const KernelSpec spec = KernelSpec::schur({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  CHECK(sigma_schur_functional(k, zero, spec).lhs == 0.0);

  const ScalarField p = gaussian_profile(g, 0.5, 2.0);
  TensorField sigma(g, 2);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) sigma.set(c, SymMat::identity(2) * p.values[c]);
  sigma.mark_psd();
  const std::vector<double> xi = snap_singular_point(g, spec.xi);
  double expected = 0.0;
  std::vector<double> x(3);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    g.center(c, x);
    const double s2 = (x[0] - xi[0]) * (x[0] - xi[0]);
    const double r2 = s2 + (x[1] - xi[1]) * (x[1] - xi[1]) + (x[2] - xi[2]) * (x[2] - xi[2]);
    expected += std::sqrt(s2 / (r2 * r2)) * p.values[c] * g.cell_volume();
  }
  CHECK(sigma_schur_functional(k, sigma, spec).lhs == doctest::Approx(expected).epsilon(1e-12));

  TensorField singular(g, 2);
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    singular.set(c, SymMat::outer(std::vector<double>{1.0, 0.0}) * p.values[c]);
  }
  singular.mark_psd();
  CHECK(sigma_schur_functional(k, singular, spec).lhs == 0.0);
}
