#include "cilab/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cilab/error.hpp"

namespace cilab {

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(count, 0.0);
  weights.assign(count, 0.0);
  for (int i = 0; i < (count + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[count - 1 - i] = x;
    weights[i] = weights[count - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

SphereProfile SphereProfile::tabulate(int n, const std::function<double(std::span<const double>)>& g,
                                      int resolution) {
  if (resolution < 2) throw Error(ErrorKind::InvalidArgument, "sphere resolution");
  SphereProfile s;
  s.n_ = n;
  if (n == 2) {
    s.n_theta_ = resolution;
    const double w = 2.0 * std::numbers::pi / resolution;
    for (int k = 0; k < resolution; ++k) {
      const double th = w * k;
      s.nodes_.push_back(std::cos(th));
      s.nodes_.push_back(std::sin(th));
      s.weights_.push_back(w);
    }
  } else if (n == 3) {
    s.n_theta_ = resolution;
    s.n_phi_ = 2 * resolution;
    std::vector<double> zw;
    gauss_legendre(resolution, s.z_nodes_, zw);
    const double dphi = 2.0 * std::numbers::pi / s.n_phi_;
    for (int i = 0; i < s.n_theta_; ++i) {
      const double z = s.z_nodes_[i];
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      for (int j = 0; j < s.n_phi_; ++j) {
        const double ph = dphi * j;
        s.nodes_.push_back(rho * std::cos(ph));
        s.nodes_.push_back(rho * std::sin(ph));
        s.nodes_.push_back(z);
        s.weights_.push_back(zw[i] * dphi);
      }
    }
  } else {
    throw Error(ErrorKind::DimensionMismatch, "sphere profiles exist for n = 2, 3 only");
  }
  s.values_.resize(s.weights_.size());
  for (std::size_t k = 0; k < s.weights_.size(); ++k) {
    const double v = g(s.node(k));
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "profile must be finite, >= 0");
    s.values_[k] = v;
  }
  return s;
}

SphereProfile SphereProfile::constant(int n, double value, int resolution) {
  return tabulate(n, [value](std::span<const double>) { return value; }, resolution);
}

double SphereProfile::operator()(std::span<const double> u) const {
  const double two_pi = 2.0 * std::numbers::pi;
  auto lerp = [](double a, double b, double t) { return a + t * (b - a); };
  if (n_ == 2) {
    double th = std::atan2(u[1], u[0]);
    if (th < 0.0) th += two_pi;
    const double pos = th / two_pi * n_theta_;
    int k = static_cast<int>(std::floor(pos));
    const double t = pos - k;
    k %= n_theta_;
    return lerp(values_[k], values_[(k + 1) % n_theta_], t);
  }
  double ph = std::atan2(u[1], u[0]);
  if (ph < 0.0) ph += two_pi;
  const double pos = ph / two_pi * n_phi_;
  int j = static_cast<int>(std::floor(pos));
  const double tp = pos - j;
  j %= n_phi_;
  const int j1 = (j + 1) % n_phi_;
  auto ring = [&](int i) { return lerp(values_[i * n_phi_ + j], values_[i * n_phi_ + j1], tp); };
  const double z = u[2];
  if (z <= z_nodes_.front()) return ring(0);
  if (z >= z_nodes_.back()) return ring(n_theta_ - 1);
  int i = 0;
  while (i + 1 < n_theta_ && z_nodes_[i + 1] < z) ++i;
  const double tz = (z - z_nodes_[i]) / (z_nodes_[i + 1] - z_nodes_[i]);
  return lerp(ring(i), ring(i + 1), tz);
}

double SphereProfile::norm(double p) const {
  double s = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) s += weights_[k] * std::pow(values_[k], p);
  return std::pow(s, 1.0 / p);
}

std::vector<double> SphereProfile::moment_vector() const {
  std::vector<double> v(n_, 0.0);
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double w = weights_[k] * std::pow(values_[k], n_ - 1);
    for (int i = 0; i < n_; ++i) v[i] += w * nodes_[k * n_ + i];
  }
  return v;
}

KernelSpec KernelSpec::schur(std::vector<double> xi, std::vector<double> omega, double a, double b) {
  KernelSpec k;
  k.kind = KernelKind::AnisotropicSchur;
  k.xi = std::move(xi);
  k.omega = std::move(omega);
  k.a = a;
  k.b = b;
  return k;
}

KernelSpec KernelSpec::inverse_r(std::vector<double> xi) {
  KernelSpec k;
  k.kind = KernelKind::PlainInverseR;
  k.xi = std::move(xi);
  return k;
}

KernelSpec KernelSpec::sphere(std::vector<double> xi, std::shared_ptr<const SphereProfile> g) {
  KernelSpec k;
  k.kind = KernelKind::SphereProfile;
  k.xi = std::move(xi);
  k.profile = std::move(g);
  return k;
}

void KernelSpec::validate(int n) const {
  if (static_cast<int>(xi.size()) != n) throw Error(ErrorKind::DimensionMismatch, "kernel singular point");
  if (!(cutoff_radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "cutoff radius must be > 0");
  if (kind == KernelKind::AnisotropicSchur) {
    if (static_cast<int>(omega.size()) != n) throw Error(ErrorKind::DimensionMismatch, "kernel direction");
    double s = 0.0;
    for (double w : omega) s += w * w;
    if (std::abs(s - 1.0) > 1e-12) throw Error(ErrorKind::InvalidArgument, "omega must be a unit vector");
    if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "kernel weights must be > 0");
  }
  if (kind == KernelKind::SphereProfile) {
    if (!profile || profile->dim() != n) throw Error(ErrorKind::DimensionMismatch, "sphere profile dimension");
  }
}

double cutoff(double r, double radius) {
  if (r <= radius) return 1.0;
  const double s = r - radius;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

double kernel_weight(const KernelSpec& k, std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  switch (k.kind) {
    case KernelKind::PlainInverseR:
      return 1.0 / std::sqrt(r2);
    case KernelKind::SphereProfile: {
      const double r = std::sqrt(r2);
      double u[3];
      for (int i = 0; i < n; ++i) u[i] = x[i] / r;
      return (*k.profile)(std::span<const double>(u, n)) / r;
    }
    case KernelKind::AnisotropicSchur: {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += k.omega[i] * x[i];
      const double s2 = s * s;
      const double perp2 = std::max(0.0, r2 - s2);
      const double denom = std::pow(k.a * s2 + k.b * perp2, 0.5 * (n + 1));
      return std::pow(s2 / denom, 1.0 / (n - 1));
    }
  }
  return 0.0;
}

}  // namespace cilab
