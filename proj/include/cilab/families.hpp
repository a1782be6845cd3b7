#pragma once

#include <span>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/grid.hpp"

namespace cilab {

/// 1 - s^2 (3 - 2 s) for s in [0, 1], clamped outside.
double smooth_drop(double s);

/// f = 1 inside radius R - w/2, 0 outside R + w/2, C1 smoothstep in between.
ScalarField smoothed_ball(const Grid& g, double radius, double width, std::span<const double> center = {});

/// Sharp ball indicator by area fraction: each cell holds the fraction of
/// `sub`^n sub-samples that fall inside the ball.
ScalarField ball_indicator(const Grid& g, double radius, std::span<const double> center = {}, int sub = 8);

/// exp(-(r / sigma)^q)
ScalarField gaussian_profile(const Grid& g, double sigma, double q, std::span<const double> center = {});

/// Smoothed indicator of the ellipsoid with semi-axes `axes`, the smoothing
/// width measured in the normalised radius sqrt(sum (x_i / a_i)^2).
ScalarField smoothed_ellipsoid(const Grid& g, std::span<const double> axes, double width);

}  // namespace cilab
