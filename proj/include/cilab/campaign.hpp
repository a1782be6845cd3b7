#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "cilab/gas.hpp"
#include "cilab/report.hpp"
#include "cilab/symmat.hpp"

namespace cilab {

/// Entries i.i.d. standard normal.
SymMat random_symmetric(int n, std::mt19937_64& rng);
/// G G^T with G an n x rank standard normal matrix; rank < 0 means n.
SymMat random_psd(int n, std::mt19937_64& rng, int rank = -1);

/// Randomized cross-checks of the mixed determinant at dimension n:
/// polarization vs oracle, diagonal restriction, the one-off trace identity,
/// the Garding inequality on PSD tuples and the n! upper bound. Errors are
/// normwise: |a - b| / max(|b|, prod ||M_j||_F).
std::vector<Report> mixed_det_check(int n, int samples, std::uint64_t seed);

/// det A = rho det S on random PSD matrices with rho > 0, and the Schur
/// complement of euler_state(rho, u, p) against p I_d, for d in 1..3.
std::vector<Report> schur_check(int samples, std::uint64_t seed);

/// prod rho_j Cor(u_0, ..., u_d)^2 against det(sum_j rho_j U_j (x) U_j),
/// U_j = (1, u_j), for d in 1..3.
Report cor_identity_check(int samples, std::uint64_t seed);

/// Motionless gas with density exp(-|y|^2 / width^2) and internal energy
/// e(t) = e0 (1 - cooling t / t_end). Mass is conserved, energy decreases.
FlowField cooling_flow(const Grid& g, std::vector<double> times, double width, double e0, double cooling);

/// Sigma(t_k, y) = c_k exp(-|y - center|^2 / width^2) P with P = I_d, or
/// e_0 (x) e_0 when `rank_one`. c_k is chosen so that (1/2) int Tr Sigma(t_k)
/// equals `fraction` of the energy the flow has lost by t_k.
DefectField gaussian_blob_defect(const FlowField& w, double fraction, double width, std::span<const double> center,
                                 bool rank_one = false);

}  // namespace cilab
