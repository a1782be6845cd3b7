#include "cilab/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cilab/error.hpp"

namespace cilab {

namespace {

void check_dim(int n) {
  if (n < 1 || n > kMaxDim) {
    throw Error(ErrorKind::DimensionMismatch, "SymMat dimension " + std::to_string(n) + " outside [1,6]");
  }
}

void check_same(const SymMat& a, const SymMat& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
}

}  // namespace

SymMat::SymMat(int n) : n_(n) { check_dim(n); }

SymMat::SymMat(int n, std::initializer_list<double> full_rows) : SymMat(n) {
  if (static_cast<int>(full_rows.size()) != n * n) {
    throw Error(ErrorKind::DimensionMismatch, "expected n*n entries");
  }
  const double* p = full_rows.begin();
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) (*this)(i, j) = p[i * n + j];
  }
}

SymMat SymMat::identity(int n) {
  SymMat a(n);
  for (int i = 0; i < n; ++i) a(i, i) = 1.0;
  return a;
}

SymMat SymMat::diag(std::span<const double> d) {
  SymMat a(static_cast<int>(d.size()));
  for (int i = 0; i < a.dim(); ++i) a(i, i) = d[i];
  return a;
}

SymMat SymMat::diag(std::initializer_list<double> d) {
  return diag(std::span<const double>(d.begin(), d.size()));
}

SymMat SymMat::from_packed(int n, std::span<const double> packed) {
  SymMat a(n);
  if (static_cast<int>(packed.size()) != packed_size(n)) {
    throw Error(ErrorKind::DimensionMismatch, "packed length mismatch");
  }
  std::copy(packed.begin(), packed.end(), a.a_.begin());
  return a;
}

SymMat SymMat::outer(std::span<const double> z) {
  SymMat a(static_cast<int>(z.size()));
  for (int i = 0; i < a.dim(); ++i) {
    for (int j = i; j < a.dim(); ++j) a(i, j) = z[i] * z[j];
  }
  return a;
}

SymMat& SymMat::operator+=(const SymMat& o) {
  check_same(*this, o);
  for (int k = 0; k < packed_size(n_); ++k) a_[k] += o.a_[k];
  return *this;
}

SymMat& SymMat::operator-=(const SymMat& o) {
  check_same(*this, o);
  for (int k = 0; k < packed_size(n_); ++k) a_[k] -= o.a_[k];
  return *this;
}

SymMat& SymMat::operator*=(double s) {
  for (int k = 0; k < packed_size(n_); ++k) a_[k] *= s;
  return *this;
}

double SymMat::trace() const {
  double t = 0.0;
  for (int i = 0; i < n_; ++i) t += (*this)(i, i);
  return t;
}

double SymMat::frobenius_norm() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const double v = (*this)(i, j);
      s += v * v;
    }
  }
  return std::sqrt(s);
}

double SymMat::quadratic_form(std::span<const double> v) const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) {
    s += (*this)(i, i) * v[i] * v[i];
    for (int j = i + 1; j < n_; ++j) s += 2.0 * (*this)(i, j) * v[i] * v[j];
  }
  return s;
}

std::vector<double> SymMat::to_dense() const {
  std::vector<double> m(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) m[i * n_ + j] = (*this)(i, j);
  }
  return m;
}

SymMat SymMat::congruence_diag(std::span<const double> d) const {
  SymMat r(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) r(i, j) = d[i] * d[j] * (*this)(i, j);
  }
  return r;
}

SymMat SymMat::congruence(std::span<const double> q) const {
  // (Q A Q^T)_{ij} = sum_{kl} q_ik a_kl q_jl
  std::array<double, kMaxDim * kMaxDim> qa{};
  for (int i = 0; i < n_; ++i) {
    for (int l = 0; l < n_; ++l) {
      double s = 0.0;
      for (int k = 0; k < n_; ++k) s += q[i * n_ + k] * (*this)(k, l);
      qa[i * n_ + l] = s;
    }
  }
  SymMat r(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = i; j < n_; ++j) {
      double s = 0.0;
      for (int l = 0; l < n_; ++l) s += qa[i * n_ + l] * q[j * n_ + l];
      r(i, j) = s;
    }
  }
  return r;
}

BlockSplit BlockSplit::of(const SymMat& a) {
  const int n = a.dim();
  if (n < 2) throw Error(ErrorKind::DimensionMismatch, "block split needs n >= 2");
  BlockSplit s;
  s.rho = a(0, 0);
  s.m.resize(n - 1);
  s.b = SymMat(n - 1);
  for (int i = 1; i < n; ++i) {
    s.m[i - 1] = a(0, i);
    for (int j = i; j < n; ++j) s.b(i - 1, j - 1) = a(i, j);
  }
  return s;
}

SymMat BlockSplit::reassemble() const {
  const int n = b.dim() + 1;
  SymMat a(n);
  a(0, 0) = rho;
  for (int i = 1; i < n; ++i) {
    a(0, i) = m[i - 1];
    for (int j = i; j < n; ++j) a(i, j) = b(i - 1, j - 1);
  }
  return a;
}

double det_dense(std::span<const double> m, int n) {
  switch (n) {
    case 0:
      return 1.0;
    case 1:
      return m[0];
    case 2:
      return m[0] * m[3] - m[1] * m[2];
    case 3:
      return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
             m[2] * (m[3] * m[7] - m[4] * m[6]);
    default:
      break;
  }
  std::array<double, kMaxDim * kMaxDim> w{};
  std::copy(m.begin(), m.begin() + n * n, w.begin());
  double d = 1.0;
  for (int k = 0; k < n; ++k) {
    int piv = k;
    double best = std::abs(w[k * n + k]);
    for (int r = k + 1; r < n; ++r) {
      const double v = std::abs(w[r * n + k]);
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (piv != k) {
      for (int c = 0; c < n; ++c) std::swap(w[k * n + c], w[piv * n + c]);
      d = -d;
    }
    const double p = w[k * n + k];
    d *= p;
    for (int r = k + 1; r < n; ++r) {
      const double f = w[r * n + k] / p;
      if (f == 0.0) continue;
      for (int c = k + 1; c < n; ++c) w[r * n + c] -= f * w[k * n + c];
    }
  }
  return d;
}

double det(const SymMat& a) {
  const int n = a.dim();
  switch (n) {
    case 1:
      return a(0, 0);
    case 2:
      return a(0, 0) * a(1, 1) - a(0, 1) * a(0, 1);
    case 3: {
      const double a00 = a(0, 0), a01 = a(0, 1), a02 = a(0, 2);
      const double a11 = a(1, 1), a12 = a(1, 2), a22 = a(2, 2);
      return a00 * (a11 * a22 - a12 * a12) - a01 * (a01 * a22 - a12 * a02) + a02 * (a01 * a12 - a11 * a02);
    }
    default: {
      const auto m = a.to_dense();
      return det_dense(m, n);
    }
  }
}

SymMat cofactor(const SymMat& a) {
  const int n = a.dim();
  SymMat c(n);
  if (n == 1) {
    c(0, 0) = 1.0;
    return c;
  }
  std::array<double, kMaxDim * kMaxDim> minor{};
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      // adj(A)_{ij} = (-1)^{i+j} det(A without row j, column i); symmetric A
      // makes this the same as the (i, j) cofactor.
      int r = 0;
      for (int row = 0; row < n; ++row) {
        if (row == j) continue;
        int col_out = 0;
        for (int col = 0; col < n; ++col) {
          if (col == i) continue;
          minor[r * (n - 1) + col_out] = a(row, col);
          ++col_out;
        }
        ++r;
      }
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      c(i, j) = sign * det_dense(minor, n - 1);
    }
  }
  return c;
}

SchurResult schur_complement(const SymMat& a) {
  const double rho = a(0, 0);
  if (!(rho > 0.0)) {
    throw Error(ErrorKind::NonPositivePivot, "a11 = " + std::to_string(rho));
  }
  const int n = a.dim();
  SymMat s(n - 1);
  for (int i = 1; i < n; ++i) {
    for (int j = i; j < n; ++j) s(i - 1, j - 1) = a(i, j) - a(0, i) * a(0, j) / rho;
  }
  return {rho, s};
}

SymMat rank_one(double rho, std::span<const double> u) {
  if (rho < 0.0) throw Error(ErrorKind::NegativeDensity, "rho = " + std::to_string(rho));
  const int n = static_cast<int>(u.size()) + 1;
  SymMat a(n);
  a(0, 0) = rho;
  for (int i = 1; i < n; ++i) {
    a(0, i) = rho * u[i - 1];
    for (int j = i; j < n; ++j) a(i, j) = rho * u[i - 1] * u[j - 1];
  }
  return a;
}

std::vector<double> eigenvalues(const SymMat& a) {
  const int n = a.dim();
  std::array<double, kMaxDim * kMaxDim> w{};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) w[i * n + j] = a(i, j);
  }
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) off += w[p * n + q] * w[p * n + q];
    }
    if (off == 0.0) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = w[p * n + q];
        if (apq == 0.0) continue;
        const double theta = (w[q * n + q] - w[p * n + p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = w[k * n + p];
          const double akq = w[k * n + q];
          w[k * n + p] = c * akp - s * akq;
          w[k * n + q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = w[p * n + k];
          const double aqk = w[q * n + k];
          w[p * n + k] = c * apk - s * aqk;
          w[q * n + k] = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) ev[i] = w[i * n + i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

bool is_psd(const SymMat& a, double tol) {
  if (tol < 0.0) throw Error(ErrorKind::InvalidArgument, "negative PSD tolerance");
  const double norm = a.frobenius_norm();
  const double bound = -tol * (1.0 + norm) - 8.0 * a.dim() * std::numeric_limits<double>::epsilon() * norm;
  for (int i = 0; i < a.dim(); ++i) {
    if (a(i, i) < bound) return false;
  }
  return eigenvalues(a).front() >= bound;
}

double trace_product(const SymMat& b, const SymMat& m) {
  if (b.dim() != m.dim()) throw Error(ErrorKind::DimensionMismatch, "trace_product");
  double s = 0.0;
  for (int i = 0; i < b.dim(); ++i) {
    s += b(i, i) * m(i, i);
    for (int j = i + 1; j < b.dim(); ++j) s += 2.0 * b(i, j) * m(i, j);
  }
  return s;
}

}  // namespace cilab
