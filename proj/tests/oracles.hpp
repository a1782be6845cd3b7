#pragma once

// Brute-force references used only by the tests.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "cilab/symmat.hpp"

namespace oracle {

inline int permutation_sign(const std::vector<int>& p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) sign = -sign;
    }
  }
  return sign;
}

// Leibniz expansion of a row-major dense n x n matrix.
inline double leibniz_det(const std::vector<double>& m, int n) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  double total = 0.0;
  do {
    double term = permutation_sign(p);
    for (int i = 0; i < n; ++i) term *= m[i * n + p[i]];
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

inline std::vector<double> dense(const cilab::SymMat& a) {
  const int n = a.dim();
  std::vector<double> m(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m[i * n + j] = a(i, j);
  }
  return m;
}

inline double det(const cilab::SymMat& a) { return leibniz_det(dense(a), a.dim()); }

// (-1)^{i+j} times the (i, j) minor.
inline double cofactor_entry(const cilab::SymMat& a, int i, int j) {
  const int n = a.dim();
  if (n == 1) return 1.0;
  std::vector<double> minor;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      if (r != i && c != j) minor.push_back(a(r, c));
    }
  }
  return ((i + j) % 2 ? -1.0 : 1.0) * leibniz_det(minor, n - 1);
}

inline cilab::SymMat random_sym(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cilab::SymMat m(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) m(i, j) = u(rng);
  }
  return m;
}

inline cilab::SymMat random_psd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  cilab::SymMat m(n);
  for (int k = 0; k < n + 1; ++k) {
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(rng);
    m += cilab::SymMat::outer(v);
  }
  return m;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace oracle
