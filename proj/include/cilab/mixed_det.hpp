#pragma once

#include <span>

#include "cilab/symmat.hpp"

namespace cilab {

/// Mixed determinant D_n(M_1, ..., M_n) by polarization:
///   D_n = 1/(2^n n!) sum_{eps in {+-1}^n} eps_1...eps_n det(sum_j eps_j M_j).
/// D_n is symmetric, n-linear and D_n(M, ..., M) = det M.
double mixed_det(std::span<const SymMat> ms);

/// Independent route: average over permutations sigma of the determinant of
/// the matrix whose column j is column j of M_sigma(j).
double mixed_det_oracle(std::span<const SymMat> ms);

/// D_n(B, M, ..., M) = Tr(B^T cof(M)) / n.
double mixed_det_one_off(const SymMat& b, const SymMat& m);

struct InequalitySides {
  double lhs;
  double rhs;

  /// lhs <= rhs + slack * (1 + |rhs|)
  bool holds(double slack = 1e-10) const;
};

/// Reverse Hoelder (Garding) for the determinant:
///   (prod det A_j)^{1/n} <= D_n(A_1, ..., A_n) on PSD tuples.
/// Throws NotPSD naming the offending index.
InequalitySides garding_gap(std::span<const SymMat> as, double psd_tol = kDefaultPsdTol);

/// D_n(A_1, ..., A_n) <= det(A_1 + ... + A_n) / n! on PSD tuples.
InequalitySides multilinear_upper(std::span<const SymMat> as, double psd_tol = kDefaultPsdTol);

}  // namespace cilab
