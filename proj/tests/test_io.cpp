#include <doctest.h>

#include <cstring>
#include <sstream>

#include "cilab/error.hpp"
#include "cilab/families.hpp"
#include "cilab/io.hpp"
#include "cilab/kernel.hpp"
#include "cilab/verify.hpp"

using namespace cilab;

namespace {

template <class T>
bool bit_equal(const std::vector<T>& a, const std::vector<T>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(T)) == 0;
}

FlowField small_flow() {
  const Grid g({-1.0, -0.5}, {0.25, 0.125}, {8, 8});
  FlowField w(g, {0.0, 0.1, 0.3});
  double v = 0.1;
  for (auto& s : w.snapshots) {
    for (std::int64_t c = 0; c < g.cell_count(); ++c) {
      s.rho[c] = v;
      s.u[2 * c] = -v / 3.0;
      s.u[2 * c + 1] = v * v;
      s.e[c] = 1.0 / (1.0 + v);
      s.p[c] = 0.4 * s.rho[c] * s.e[c];
      v += 0.0137;
    }
  }
  return w;
}

}  // namespace

TEST_CASE("DBV1 tensor round trip keeps bits and singular points") {
  const Grid g({-1.5, -1.5}, {3.0 / 64, 3.0 / 64}, {64, 64});
  KernelSpec k = KernelSpec::inverse_r({0.0, 0.0});
  k.cutoff_radius = 0.5;
  const TensorField f = extreme_tensor(g, k);
  std::stringstream ss;
  write_dbv1(ss, f);
  CHECK(sniff_format(ss.str()) == "dbv1");
  const TensorField r = read_dbv1_tensor(ss);
  CHECK(r.grid() == g);
  CHECK(r.dim() == 2);
  CHECK(bit_equal(r.raw(), f.raw()));
  REQUIRE(r.singular_points().size() == f.singular_points().size());
  for (std::size_t i = 0; i < r.singular_points().size(); ++i) {
    CHECK(r.singular_points()[i].position == f.singular_points()[i].position);
    CHECK(r.singular_points()[i].resolve_radius == f.singular_points()[i].resolve_radius);
  }
}

TEST_CASE("DBV1 scalar round trip") {
  const Grid g = Grid::cube(3, 1.0, 12);
  const ScalarField f = gaussian_profile(g, 0.4, 1.7);
  std::stringstream ss;
  write_dbv1(ss, f);
  const ScalarField r = read_dbv1_scalar(ss);
  CHECK(r.grid == g);
  CHECK(bit_equal(r.values, f.values));
}

TEST_CASE("DBV1 defect round trip") {
  const Grid g = Grid::cube(2, 1.0, 6);
  DefectField d{g, {0.0, 0.5}, {}};
  for (int k = 0; k < 2; ++k) {
    d.sigma.push_back(TensorField::from_function(g, 2, [k](std::span<const double> y) {
      return SymMat::diag({1.0 + y[0] * y[0], 0.5 + k});
    }));
  }
  std::stringstream ss;
  write_dbv1(ss, d);
  const DefectField r = read_dbv1_defect(ss);
  CHECK(r.times == d.times);
  REQUIRE(r.sigma.size() == 2);
  for (int k = 0; k < 2; ++k) CHECK(bit_equal(r.sigma[k].raw(), d.sigma[k].raw()));
}

TEST_CASE("FLW1 round trip") {
  const FlowField w = small_flow();
  std::stringstream ss;
  write_flw1(ss, w);
  CHECK(sniff_format(ss.str()) == "flw1");
  const FlowField r = read_flw1(ss);
  CHECK(r.grid == w.grid);
  CHECK(r.times == w.times);
  for (std::size_t k = 0; k < w.times.size(); ++k) {
    CHECK(bit_equal(r.snapshots[k].rho, w.snapshots[k].rho));
    CHECK(bit_equal(r.snapshots[k].u, w.snapshots[k].u));
    CHECK(bit_equal(r.snapshots[k].p, w.snapshots[k].p));
    CHECK(bit_equal(r.snapshots[k].e, w.snapshots[k].e));
  }
}

TEST_CASE("format errors") {
  auto kind = [](const std::string& text, int which) {
    std::istringstream is(text);
    try {
      if (which == 0) read_dbv1_tensor(is);
      if (which == 1) read_flw1(is);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind("FLW1\n", 0) == ErrorKind::Format);
  CHECK(kind("DBV1\n", 1) == ErrorKind::Format);
  CHECK(kind("", 0) == ErrorKind::Format);

  std::stringstream ss;
  write_flw1(ss, small_flow());
  const std::string full = ss.str();
  CHECK(kind(full.substr(0, full.size() - 5), 1) == ErrorKind::Format);
}
