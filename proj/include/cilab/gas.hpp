#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/grid.hpp"
#include "cilab/report.hpp"
#include "cilab/symmat.hpp"

namespace cilab {

struct FlowSnapshot {
  std::vector<double> rho;
  std::vector<double> u;  // cells x d, component fastest
  std::vector<double> p;
  std::vector<double> e;
};

/// Gas state (rho, u, p, e) on a spatial grid at increasing instants, zero
/// outside the box.
struct FlowField {
  Grid grid;
  std::vector<double> times;
  std::vector<FlowSnapshot> snapshots;

  FlowField() = default;
  /// All-vacuum flow.
  FlowField(Grid g, std::vector<double> t);

  int d() const { return grid.dim(); }
  std::int64_t cells() const { return grid.cell_count(); }
  double max_density() const;
  /// rho > 1e-12 max rho
  double vacuum_threshold() const { return 1e-12 * max_density(); }
  /// Sets u := 0 wherever rho is at or below the vacuum threshold.
  void apply_vacuum_convention();
  /// First k+1 snapshots.
  FlowField truncated(std::size_t k) const;
};

inline constexpr double kAdmissibleTol = 1e-10;

struct FlowSummary {
  std::vector<double> mass;    // per snapshot
  std::vector<double> energy;  // int (rho |u|^2 / 2 + rho e), per snapshot
  double M = 0.0;
  double E0 = 0.0;
  double ubar = 0.0;  // sqrt(2 E0 / M)
  double mass_drift = 0.0;        // max |M(t) - M| / M
  double energy_overshoot = 0.0;  // max (E(t) - E0) / E0
  bool admissible = true;
};

FlowSummary summary(const FlowField& w);

/// Throws NotAdmissible when rho, p or e is negative or a value is not finite.
void check_states(const FlowField& w);

/// rho U(x)U + p J with U = (1, u), J = diag(0, I_d). Throws NegativeState.
SymMat euler_state(double rho, std::span<const double> u, double p);

/// Space-time tensor over (t, y); requires equally spaced instants, which
/// become the cell centres of the time axis.
TensorField euler_tensor(const FlowField& w);

/// Determinant of the (1+d) matrix with columns (1, u_j).
double cor(std::span<const std::vector<double>> us);

/// Shifts h_0 = 0, h_1..h_d in length units. Functionals snap each shift to
/// the nearest whole number of cells.
struct ShiftSet {
  std::vector<std::vector<double>> h;

  static ShiftSet from(std::vector<std::vector<double>> rest);  // prepends h_0 = 0
  bool affinely_independent() const;
  std::vector<std::vector<std::int64_t>> offsets(const Grid& g) const;
};

/// lhs = int rho^{1/d} p dy dt, rhs_scale = M^{1/d} sqrt(M E0).
Report functional_pgd(const FlowField& w);

/// H(t_k; h) = int (prod_j rho(y + h_j) Cor(u(y + h_0), ..., u(y + h_d))^2)^{1/d} dy
double functional_h(const FlowField& w, std::size_t t_index, const ShiftSet& s);

/// lhs = int H dt, rhs_scale = M^{1/d} sqrt(M E0).
Report functional_estuu(const FlowField& w, const ShiftSet& s);

/// Two rows: the direct mass-energy form (sum over the h_d lattice of H^d
/// against M E0^d, at `t_index` or the sup over instants when t_index < 0)
/// and the compensated form (sup over h_d of int H dt against M^{1/d} sqrt(M E0)).
std::vector<Report> direct_bound(const FlowField& w, long t_index, std::span<const std::vector<double>> partial);

/// lhs = int ((t-tau)^2 / (E0 (t-tau)^2 + M |y-eta|^2)^{d/2+1})^{1/d} p dy dt,
/// rhs_scale = E0^{1/2 - 1/d}. tau is moved off the instants onto the nearest
/// midpoint when it falls inside the time range; eta is snapped to the dual lattice.
Report functional_schurp(const FlowField& w, double tau, std::span<const double> eta);

/// Same kernel without the mass/energy weights, rhs_scale = M + sqrt(M E0).
Report functional_schurp_nonhom(const FlowField& w, double tau, std::span<const double> eta);

/// sup of functional_schurp over tau in the midpoints (every `time_stride`-th)
/// and eta in the dual lattice (every `space_stride`-th corner).
Report schurp_sup(const FlowField& w, int time_stride, int space_stride);

/// y -> y + t w, u -> u + w, resampled conservatively onto the same grid.
FlowField galilean_boost(const FlowField& w, std::span<const double> wvec);

/// t' = t, y' = mu y, rho' = rho, u' = mu u, p' = mu^2 p, e' = mu^2 e.
FlowField scaling_transform(const FlowField& w, double mu);

/// (1/4) int int rho(y) rho(z) |u(z) - u(y)|^2 dy dz + M int rho e, at t_0.
double galilean_energy(const FlowField& w);

/// Sigma(t, y), PSD of dimension d, on the flow's instants and grid.
struct DefectField {
  Grid grid;
  std::vector<double> times;
  std::vector<TensorField> sigma;
};

/// lhs = int kernel (det Sigma)^{1/d} with the schurp kernel,
/// rhs_scale = E0^{1/2 - 1/d}; E(t) + (1/2) int Tr Sigma is audited against E0.
Report functional_defect(const FlowField& w, const DefectField& sigma, double tau, std::span<const double> eta);

/// Trapezoid weights of the instants.
std::vector<double> trapezoid_weights(std::span<const double> times);

}  // namespace cilab
