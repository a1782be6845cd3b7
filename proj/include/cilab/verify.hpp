#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cilab/divergence.hpp"
#include "cilab/field.hpp"
#include "cilab/kernel.hpp"
#include "cilab/report.hpp"

namespace cilab {

struct DetRoot {
  double value = 0.0;
  /// Cells whose determinant came out below -1e-12 ||A||_F^n and was clamped.
  std::int64_t clamped = 0;
};

/// int (det A)^{1/(n-1)} dx by the cell-centred rule; requires the PSD flag.
DetRoot integral_det_root(const TensorField& a);

/// lhs = int (det A)^{1/(n-1)}, rhs_scale = ||Div A||^{n/(n-1)}.
Report verify_fund(const TensorField& a);

/// lhs as verify_fund, rhs_scale = (prod_i ||(Div A)_i||)^{1/(n-1)}. Records
/// the row masses and the optimal row scaling mu_i = 1 / ||(Div A)_i||.
Report verify_prod(const TensorField& a);

struct DirectionalAverage {
  double estimate = 0.0;   // exp(mean log ||div(A e)||)
  double std_error = 0.0;  // of `estimate`, by the delta method
  double rhs_scale = 0.0;  // (n * estimate)^{n/(n-1)}
  int used = 0;
  int skipped = 0;         // directions with zero mass
};

/// Monte-Carlo average of log ||div(A e)|| over uniform directions e.
DirectionalAverage log_avg_direction(const TensorField& a, int samples, std::uint64_t seed = 1);
Report verify_log_avg(const TensorField& a, int samples, std::uint64_t seed = 1);

/// lhs = int D_n(A_1, ..., A_n)^{1/(n-1)}, rhs_scale = (prod ||Div A_j||)^{1/(n-1)}.
Report verify_mulest(std::span<const TensorField> as);

/// Singular point of `k` snapped to the grid's dual lattice. Throws
/// SingularOnNode when it sits exactly on a cell centre.
std::vector<double> snap_singular_point(const Grid& g, std::span<const double> xi);

/// F = phi(r) x(x)x / r^{n+1} about the snapped singular point (times
/// g(x/r)^{n-1} for a sphere-profile kernel). The point is registered with
/// the field so Div F carries its point mass; `resolve_radius` < 0 selects
/// max(4h, min(R, dist(xi, box boundary)) / 2).
TensorField extreme_tensor(const Grid& g, const KernelSpec& k, double resolve_radius = -1.0);

/// int w(x - xi) (det A / omega^T A omega)^{1/(n-1)} dx with w the kernel of
/// `k` (the anisotropic kernel reproduces ((omega.x)^2 / |x|^{n+1})^{1/(n-1)}).
double schur_kernel_functional(const TensorField& a, const KernelSpec& k);
/// Report form: rhs_scale = ||Div A||.
Report verify_schur(const TensorField& a, const KernelSpec& k);

/// int w(x - xi) (det Sigma)^{1/(n-1)} dx for A = K + diag(0, Sigma);
/// rhs_scale = ||Div A||.
Report sigma_schur_functional(const TensorField& k_field, const TensorField& sigma, const KernelSpec& kern);

}  // namespace cilab
