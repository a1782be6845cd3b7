#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cilab/config.hpp"
#include "cilab/field.hpp"
#include "cilab/gas.hpp"

namespace cilab {

using VelocityField = std::function<void(std::span<const double> y, std::span<double> u)>;

/// Pressureless transport y -> y + t u0(y). Each source cell is split into
/// `sub`^d sub-cells whose images (boxes spanned by the displaced sub-cell
/// faces) receive the sub-cell's mass and momentum. Exact for linear u0 in 1D.
/// Throws CharacteristicCrossing when det(I + s grad u0) <= 0 on the support for some s up to the last instant
/// and SupportReachedBoundary when an image leaves the box.
FlowField dust_flow(const ScalarField& rho0, const VelocityField& u0, std::vector<double> times, int sub = 2);

struct GasState {
  Grid grid;
  std::vector<double> rho;
  std::vector<double> u;  // cells x d
  std::vector<double> p;
};

struct SolverOptions {
  double gamma = 1.4;
  double cfl = 0.4;
  double t_end = 0.1;
  double dt_out = 0.01;
};

/// Rusanov finite volumes for the perfect gas p = (gamma - 1) rho e, d = 1, 2,
/// closed box, outputs at multiples of dt_out up to t_end.
FlowField fv_solve(const GasState& init, const SolverOptions& opt);

/// Initial data from a configuration (`init = sod | bump`).
GasState gas_initial(const Config& c);
SolverOptions solver_options(const Config& c);
/// `flows dust` configuration (`rho0 = gaussian | ball`, `u0 = linear | constant`).
FlowField dust_from_config(const Config& c);

}  // namespace cilab
