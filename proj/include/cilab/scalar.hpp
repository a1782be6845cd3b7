#pragma once

#include <span>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/kernel.hpp"
#include "cilab/report.hpp"

namespace cilab {

/// Discrete total variation: mass of the gradient measure, box-face sheets
/// of the zero extension included.
double total_variation(const ScalarField& f);

struct SupResult {
  double value = 0.0;
  std::vector<double> xi;
  int evaluations = 0;
};

/// sup over xi of int f(x) w(x - xi) dx, xi ranging over the grid's dual
/// lattice (cell corners, box boundary included): a coarse lattice scan
/// followed by per-axis golden-section refinement on the corner indices.
SupResult sup_convolution(const ScalarField& f, const std::function<double(std::span<const double>)>& w);

/// lhs = sup_xi int |f(x)| / |x - xi| dx, rhs_scale = TV(|f|).
Report conv_ratio(const ScalarField& f);

/// lhs = sup_xi (g-bar * |f|)(xi) with g-bar(x) = g(x/r)/r,
/// rhs_scale = TV(|f|) ||g||_{L^{n-1}(S_{n-1})}.
Report conv_kernel_bound(const ScalarField& f, const SphereProfile& g);

/// fs[j] lives on R^{d-1} (the coordinates of R^d with y_j removed).
/// lhs = || prod_j f_j(y-hat_j) ||_{L^1(R^d)}, rhs_scale = prod_j ||f_j||_{L^{d-1}}.
Report gagliardo_classic(std::span<const ScalarField> fs);

/// fs[j] lives on R x R^{d-1} (time, then y with y_j removed).
/// lhs = int (t^2 / (t^2 + |y|^2)^{1+d/2})^{1/d} |prod_j f_j(t, y-hat_j)| dy dt
/// with the kernel anchored at `xi` (default: origin, snapped to the dual
/// lattice); rhs_scale = prod_j ||f_j||_{L^d}.
Report gagliardo_time(std::span<const ScalarField> fs, std::span<const double> xi = {});

}  // namespace cilab
