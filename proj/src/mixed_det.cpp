#include "cilab/mixed_det.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "cilab/error.hpp"

namespace cilab {

namespace {

int check_tuple(std::span<const SymMat> ms) {
  const int n = static_cast<int>(ms.size());
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorKind::DimensionMismatch, "tuple length " + std::to_string(n));
  }
  for (const auto& m : ms) {
    if (m.dim() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "tuple of " + std::to_string(n) + " matrices of dimension " + std::to_string(m.dim()));
    }
  }
  return n;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

void check_psd(std::span<const SymMat> as, double tol) {
  for (std::size_t j = 0; j < as.size(); ++j) {
    if (!is_psd(as[j], tol)) throw Error(ErrorKind::NotPSD, "argument " + std::to_string(j));
  }
}

}  // namespace

double mixed_det(std::span<const SymMat> ms) {
  const int n = check_tuple(ms);
  double acc = 0.0;
  const unsigned count = 1u << n;
  for (unsigned mask = 0; mask < count; ++mask) {
    SymMat s(n);
    int negatives = 0;
    for (int j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        s -= ms[j];
        ++negatives;
      } else {
        s += ms[j];
      }
    }
    const double d = det(s);
    acc += (negatives % 2 == 0) ? d : -d;
  }
  return acc / (static_cast<double>(count) * factorial(n));
}

double mixed_det_oracle(std::span<const SymMat> ms) {
  const int n = check_tuple(ms);
  std::array<int, kMaxDim> perm{};
  std::iota(perm.begin(), perm.begin() + n, 0);
  std::array<double, kMaxDim * kMaxDim> cols{};
  double acc = 0.0;
  do {
    for (int j = 0; j < n; ++j) {
      const SymMat& src = ms[perm[j]];
      for (int i = 0; i < n; ++i) cols[i * n + j] = src(i, j);
    }
    acc += det_dense(cols, n);
  } while (std::next_permutation(perm.begin(), perm.begin() + n));
  return acc / factorial(n);
}

double mixed_det_one_off(const SymMat& b, const SymMat& m) {
  if (b.dim() != m.dim()) throw Error(ErrorKind::DimensionMismatch, "mixed_det_one_off");
  return trace_product(b, cofactor(m)) / b.dim();
}

bool InequalitySides::holds(double slack) const { return lhs <= rhs + slack * (1.0 + std::abs(rhs)); }

InequalitySides garding_gap(std::span<const SymMat> as, double psd_tol) {
  const int n = check_tuple(as);
  check_psd(as, psd_tol);
  double prod = 1.0;
  for (const auto& a : as) prod *= std::max(det(a), 0.0);
  return {std::pow(prod, 1.0 / n), mixed_det(as)};
}

InequalitySides multilinear_upper(std::span<const SymMat> as, double psd_tol) {
  const int n = check_tuple(as);
  check_psd(as, psd_tol);
  SymMat sum(n);
  for (const auto& a : as) sum += a;
  return {mixed_det(as), det(sum) / factorial(n)};
}

}  // namespace cilab
