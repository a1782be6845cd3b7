#include <doctest.h>

#include <random>

#include "cilab/error.hpp"
#include "cilab/symmat.hpp"
#include "oracles.hpp"

using namespace cilab;

TEST_CASE("det examples") {
  CHECK(det(SymMat::identity(3)) == doctest::Approx(1.0));
  CHECK(det(SymMat::diag({2.0, 3.0})) == doctest::Approx(6.0));
  CHECK(det(SymMat(2, {2, 1, 1, 1})) == doctest::Approx(1.0));
}

TEST_CASE("det matches the Leibniz expansion for n = 1..6") {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 6; ++n) {
    for (int s = 0; s < 50; ++s) {
      const SymMat a = oracle::random_sym(n, rng);
      CHECK(oracle::rel(det(a), oracle::det(a)) < 1e-12);
    }
  }
}

TEST_CASE("det keeps the sign of indefinite matrices") {
  CHECK(det(SymMat::diag({1.0, -1.0})) == doctest::Approx(-1.0));
  CHECK(det(SymMat::diag({-1.0, -2.0, -3.0, 1.0})) == doctest::Approx(-6.0));
}

TEST_CASE("cofactor examples and entrywise oracle") {
  const SymMat c = cofactor(SymMat::diag({2.0, 3.0}));
  CHECK(c(0, 0) == doctest::Approx(3.0));
  CHECK(c(1, 1) == doctest::Approx(2.0));
  CHECK(c(0, 1) == doctest::Approx(0.0));
  for (int n = 2; n <= 6; ++n) {
    const SymMat id = cofactor(SymMat::identity(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) CHECK(id(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));
    }
  }
  std::mt19937_64 rng(5);
  for (int n = 2; n <= 5; ++n) {
    const SymMat a = oracle::random_sym(n, rng);
    const SymMat ca = cofactor(a);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) CHECK(oracle::rel(ca(i, j), oracle::cofactor_entry(a, i, j)) < 1e-12);
    }
  }
}

TEST_CASE("property: A cof(A) = det(A) I and det cof(A) = det(A)^(n-1)") {
  std::mt19937_64 rng(7);
  for (int n = 2; n <= 6; ++n) {
    for (int s = 0; s < 200; ++s) {
      const SymMat a = oracle::random_sym(n, rng);
      const SymMat c = cofactor(a);
      const double d = det(a);
      const double scale = std::max(1.0, std::pow(a.frobenius_norm(), n));
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double v = 0.0;
          for (int k = 0; k < n; ++k) v += a(i, k) * c(k, j);
          CHECK(std::abs(v - (i == j ? d : 0.0)) < 1e-12 * scale);
        }
      }
      CHECK(std::abs(det(c) - std::pow(d, n - 1)) < 1e-10 * std::max(1.0, std::pow(scale, n - 1)));
    }
  }
}

TEST_CASE("schur_complement examples") {
  const SchurResult r = schur_complement(SymMat(2, {2, 1, 1, 1}));
  CHECK(r.rho == doctest::Approx(2.0));
  CHECK(r.s.dim() == 1);
  CHECK(r.s(0, 0) == doctest::Approx(0.5));
  const SchurResult id = schur_complement(SymMat::identity(4));
  CHECK(id.rho == 1.0);
  for (int i = 0; i < 3; ++i) CHECK(id.s(i, i) == 1.0);
  try {
    schur_complement(SymMat::diag({0.0, 1.0}));
    FAIL("expected NonPositivePivot");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositivePivot);
  }
}

TEST_CASE("property: det A = rho det S") {
  std::mt19937_64 rng(9);
  for (int n = 2; n <= 6; ++n) {
    for (int s = 0; s < 200; ++s) {
      SymMat a = oracle::random_sym(n, rng);
      a(0, 0) = std::abs(a(0, 0)) + 0.1;
      const SchurResult r = schur_complement(a);
      CHECK(oracle::rel(r.rho * oracle::det(r.s), oracle::det(a)) < 1e-10);
    }
  }
}

TEST_CASE("BlockSplit reassembles exactly") {
  std::mt19937_64 rng(3);
  const SymMat a = oracle::random_sym(4, rng);
  const BlockSplit b = BlockSplit::of(a);
  CHECK(b.rho == a(0, 0));
  const SymMat back = b.reassemble();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) CHECK(back(i, j) == a(i, j));
  }
}

TEST_CASE("rank_one") {
  const SymMat e = rank_one(1.0, std::vector<double>{0.0, 0.0});
  CHECK(e(0, 0) == 1.0);
  CHECK(e.frobenius_norm() == doctest::Approx(1.0));
  const std::vector<double> u{0.5, -2.0};
  const SymMat r = rank_one(3.0, u);
  CHECK(r(0, 0) == 3.0);
  CHECK(r(0, 1) == doctest::Approx(1.5));
  CHECK(r(0, 2) == doctest::Approx(-6.0));
  CHECK(det(r) == doctest::Approx(0.0));
  CHECK_THROWS_AS(rank_one(-1.0, u), Error);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int s = 0; s < 500; ++s) {
    std::vector<double> v(static_cast<std::size_t>(1 + s % 4));
    for (auto& x : v) x = nd(rng);
    const SymMat m = rank_one(std::abs(nd(rng)), v);
    CHECK(is_psd(m, 0.0));
    if (m(0, 0) > 0.0) {
      const SchurResult sr = schur_complement(m);
      CHECK(sr.s.frobenius_norm() < 1e-12 * std::max(1.0, m.frobenius_norm()));
    }
  }
}

TEST_CASE("is_psd") {
  CHECK(is_psd(SymMat::identity(3)));
  CHECK_FALSE(is_psd(SymMat::diag({1.0, -1.0})));
  CHECK(is_psd(SymMat::diag({1.0, -1e-13})));
}

TEST_CASE("eigenvalues reproduce trace and determinant") {
  std::mt19937_64 rng(4);
  for (int n = 2; n <= 6; ++n) {
    const SymMat a = oracle::random_sym(n, rng);
    const auto ev = eigenvalues(a);
    double sum = 0.0, prod = 1.0;
    for (double v : ev) {
      sum += v;
      prod *= v;
    }
    CHECK(sum == doctest::Approx(a.trace()).epsilon(1e-10));
    CHECK(oracle::rel(prod, oracle::det(a)) < 1e-10);
  }
}
