#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

namespace cilab {

/// Non-negative function g on the unit sphere S_{n-1} (n = 2 or 3), tabulated
/// on a fixed quadrature rule and interpolated in between.
///
/// n = 2: K equispaced angles, trapezoid weights 2 pi / K (spectrally accurate
/// for smooth periodic g). n = 3: Gauss-Legendre in z = cos(theta) times 2K
/// equispaced azimuths; exact for polynomials of degree <= 2K-1 in z.
class SphereProfile {
 public:
  static SphereProfile tabulate(int n, const std::function<double(std::span<const double>)>& g,
                                int resolution = 64);
  static SphereProfile constant(int n, double value, int resolution = 64);

  int dim() const { return n_; }
  /// Interpolated value at a unit vector.
  double operator()(std::span<const double> unit) const;

  std::size_t node_count() const { return weights_.size(); }
  std::span<const double> node(std::size_t k) const { return {nodes_.data() + k * n_, static_cast<std::size_t>(n_)}; }
  double weight(std::size_t k) const { return weights_[k]; }
  double value(std::size_t k) const { return values_[k]; }

  /// (int_S g^p ds)^{1/p}
  double norm(double p) const;
  /// ||g||_{L^{n-1}(S_{n-1})}
  double norm_nm1() const { return norm(n_ - 1); }
  /// V = int_S g^{n-1} omega ds
  std::vector<double> moment_vector() const;

 private:
  int n_ = 0;
  int n_theta_ = 0;  // n = 2: angles; n = 3: z nodes
  int n_phi_ = 0;    // n = 3 only
  std::vector<double> z_nodes_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> values_;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

enum class KernelKind { AnisotropicSchur, PlainInverseR, SphereProfile };

/// Weight kernel anchored at a singular point xi.
///   AnisotropicSchur: ((omega.x)^2 / (a (omega.x)^2 + b |x_perp|^2)^{(n+1)/2})^{1/(n-1)}
///   PlainInverseR:    1 / |x|
///   SphereProfile:    g(x/|x|) / |x|
/// with x measured from xi. `cutoff_radius` is the R of the extreme-tensor
/// cut-off (1 on [0,R], C1 smoothstep down to 0 on [R, R+1]).
struct KernelSpec {
  KernelKind kind = KernelKind::AnisotropicSchur;
  std::vector<double> xi;
  std::vector<double> omega;
  double a = 1.0;
  double b = 1.0;
  double cutoff_radius = std::numeric_limits<double>::infinity();
  std::shared_ptr<const SphereProfile> profile;

  static KernelSpec schur(std::vector<double> xi, std::vector<double> omega, double a = 1.0, double b = 1.0);
  static KernelSpec inverse_r(std::vector<double> xi);
  static KernelSpec sphere(std::vector<double> xi, std::shared_ptr<const SphereProfile> g);

  /// Throws InvalidArgument / DimensionMismatch on a malformed spec.
  void validate(int n) const;
};

/// phi(r): 1 on [0, R], 1 - s^2 (3 - 2 s) with s = r - R on (R, R + 1), 0 beyond.
double cutoff(double r, double radius);

/// Kernel value at displacement x = point - xi (never evaluated at x = 0 by
/// the quadratures, which keep xi on the dual lattice).
double kernel_weight(const KernelSpec& k, std::span<const double> x);

}  // namespace cilab
