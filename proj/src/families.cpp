#include "cilab/families.hpp"

#include <algorithm>
#include <cmath>

#include "cilab/error.hpp"

namespace cilab {

namespace {

double dist(std::span<const double> p, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - (c.empty() ? 0.0 : c[i]);
    s += d * d;
  }
  return std::sqrt(s);
}

void check_center(const Grid& g, std::span<const double> c) {
  if (!c.empty() && static_cast<int>(c.size()) != g.dim()) throw Error(ErrorKind::DimensionMismatch, "centre");
}

}  // namespace

double smooth_drop(double s) {
  if (s <= 0.0) return 1.0;
  if (s >= 1.0) return 0.0;
  return 1.0 - s * s * (3.0 - 2.0 * s);
}

ScalarField smoothed_ball(const Grid& g, double radius, double width, std::span<const double> center) {
  check_center(g, center);
  if (!(width > 0.0) || !(radius > 0.0)) throw Error(ErrorKind::InvalidArgument, "ball radius and width must be > 0");
  return ScalarField::from_function(g, [&](std::span<const double> p) {
    return smooth_drop((dist(p, center) - (radius - 0.5 * width)) / width);
  });
}

ScalarField ball_indicator(const Grid& g, double radius, std::span<const double> center, int sub) {
  check_center(g, center);
  const int n = g.dim();
  ScalarField f(g);
  std::vector<double> c(n), q(n);
  std::vector<int> k(n);
  const double r2 = radius * radius;
  double half_diag = 0.0;
  for (int i = 0; i < n; ++i) half_diag += 0.25 * g.spacing()[i] * g.spacing()[i];
  half_diag = std::sqrt(half_diag);
  int total = 1;
  for (int i = 0; i < n; ++i) total *= sub;
  for (std::int64_t cell = 0; cell < g.cell_count(); ++cell) {
    g.center(cell, c);
    const double r = dist(c, center);
    if (r + half_diag <= radius) {
      f.values[cell] = 1.0;
      continue;
    }
    if (r - half_diag >= radius) continue;
    int inside = 0;
    for (int s = 0; s < total; ++s) {
      int rest = s;
      double d2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const int ki = rest % sub;
        rest /= sub;
        const double x = c[i] + ((ki + 0.5) / sub - 0.5) * g.spacing()[i] - (center.empty() ? 0.0 : center[i]);
        d2 += x * x;
      }
      inside += d2 <= r2 ? 1 : 0;
    }
    f.values[cell] = static_cast<double>(inside) / total;
  }
  return f;
}

ScalarField gaussian_profile(const Grid& g, double sigma, double q, std::span<const double> center) {
  check_center(g, center);
  if (!(sigma > 0.0) || !(q > 0.0)) throw Error(ErrorKind::InvalidArgument, "gaussian sigma and q must be > 0");
  return ScalarField::from_function(g, [&](std::span<const double> p) {
    return std::exp(-std::pow(dist(p, center) / sigma, q));
  });
}

ScalarField smoothed_ellipsoid(const Grid& g, std::span<const double> axes, double width) {
  if (static_cast<int>(axes.size()) != g.dim()) throw Error(ErrorKind::DimensionMismatch, "ellipsoid axes");
  for (double a : axes) {
    if (!(a > 0.0)) throw Error(ErrorKind::InvalidArgument, "ellipsoid axes must be > 0");
  }
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidArgument, "ellipsoid width must be > 0");
  return ScalarField::from_function(g, [&](std::span<const double> p) {
    double s = 0.0;
    for (std::size_t i = 0; i < axes.size(); ++i) s += (p[i] / axes[i]) * (p[i] / axes[i]);
    return smooth_drop((std::sqrt(s) - (1.0 - 0.5 * width)) / width);
  });
}

}  // namespace cilab
