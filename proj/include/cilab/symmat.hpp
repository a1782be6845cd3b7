#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace cilab {

inline constexpr int kMaxDim = 6;

/// Packed index of entry (i, j), i <= j, in the upper-triangular row-major
/// layout used by SymMat and by the DBV1 file format.
constexpr int packed_index(int n, int i, int j) {
  if (i > j) {
    const int t = i;
    i = j;
    j = t;
  }
  return i * n - i * (i - 1) / 2 + (j - i);
}

constexpr int packed_size(int n) { return n * (n + 1) / 2; }

/// Dense symmetric matrix of dimension 1..6. Only the upper triangle is
/// stored, so symmetry holds by construction.
class SymMat {
 public:
  SymMat() = default;
  explicit SymMat(int n);
  /// Row-major full matrix; only the upper triangle is read.
  SymMat(int n, std::initializer_list<double> full_rows);

  static SymMat identity(int n);
  static SymMat diag(std::span<const double> d);
  static SymMat diag(std::initializer_list<double> d);
  static SymMat from_packed(int n, std::span<const double> packed);
  /// Z (x) Z
  static SymMat outer(std::span<const double> z);

  int dim() const { return n_; }

  double operator()(int i, int j) const { return a_[packed_index(n_, i, j)]; }
  double& operator()(int i, int j) { return a_[packed_index(n_, i, j)]; }

  std::span<const double> packed() const { return {a_.data(), static_cast<std::size_t>(packed_size(n_))}; }
  std::span<double> packed() { return {a_.data(), static_cast<std::size_t>(packed_size(n_))}; }

  SymMat& operator+=(const SymMat& o);
  SymMat& operator-=(const SymMat& o);
  SymMat& operator*=(double s);

  friend SymMat operator+(SymMat a, const SymMat& b) { return a += b; }
  friend SymMat operator-(SymMat a, const SymMat& b) { return a -= b; }
  friend SymMat operator*(double s, SymMat a) { return a *= s; }
  friend SymMat operator*(SymMat a, double s) { return a *= s; }

  double trace() const;
  double frobenius_norm() const;
  /// v^T A v
  double quadratic_form(std::span<const double> v) const;

  /// Full row-major copy (n*n entries).
  std::vector<double> to_dense() const;

  /// D^T A D for a diagonal D, i.e. entries scaled by d_i d_j.
  SymMat congruence_diag(std::span<const double> d) const;
  /// Q A Q^T for a row-major n x n matrix Q.
  SymMat congruence(std::span<const double> q) const;

 private:
  int n_ = 0;
  std::array<double, packed_size(kMaxDim)> a_{};
};

/// rho, m, B of A = [[rho, m^T], [m, B]].
struct BlockSplit {
  double rho = 0.0;
  std::vector<double> m;
  SymMat b;

  static BlockSplit of(const SymMat& a);
  SymMat reassemble() const;
};

struct SchurResult {
  double rho;
  SymMat s;
};

double det(const SymMat& a);

/// Determinant of a general row-major n x n matrix (n <= 6), by Gaussian
/// elimination with partial pivoting. n = 0 yields 1.
double det_dense(std::span<const double> m, int n);

/// Adjugate of A; satisfies A * cofactor(A) = det(A) I for every A.
SymMat cofactor(const SymMat& a);

/// (a11, B - m m^T / a11). Throws NonPositivePivot when a11 <= 0.
SchurResult schur_complement(const SymMat& a);

/// rho U (x) U with U = (1, u). Throws NegativeDensity when rho < 0.
SymMat rank_one(double rho, std::span<const double> u);

inline constexpr double kDefaultPsdTol = 1e-10;

/// Eigenvalues in ascending order (cyclic Jacobi).
std::vector<double> eigenvalues(const SymMat& a);

/// Smallest eigenvalue >= -tol * (1 + ||a||_F) - 8 n eps ||a||_F, the last
/// term being the rounding floor of the eigensolver.
bool is_psd(const SymMat& a, double tol = kDefaultPsdTol);

/// Tr(B^T M) for symmetric arguments.
double trace_product(const SymMat& b, const SymMat& m);

}  // namespace cilab
