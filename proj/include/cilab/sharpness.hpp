#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cilab/grid.hpp"
#include "cilab/report.hpp"

namespace cilab {

enum class Family { RadialSmoothedIndicator, GaussianProfiles, AnisotropicEllipsoids };

Family parse_family(const std::string& id);
std::string family_id(Family f);
std::vector<std::string> family_params(Family f);

struct ProbeSetup {
  Family family = Family::RadialSmoothedIndicator;
  int dim = 2;
  std::int64_t cells = 128;
  double half_width = 1.5;
  std::vector<double> lower;  // empty: family default
  std::vector<double> upper;
  std::vector<double> initial;
  int budget = 60;

  Grid grid() const { return Grid::cube(dim, half_width, cells); }
  /// Fills empty bounds / initial guess with the family defaults for the grid.
  ProbeSetup resolved() const;
};

struct TraceRow {
  std::vector<double> params;
  Report report;  // verify_fund of the family member
  bool below_resolution = false;
};

/// verify_fund of one family member.
TraceRow evaluate_family(const ProbeSetup& s, const std::vector<double>& params);

struct ProbeResult {
  std::vector<double> best_params;
  double best_ratio = 0.0;
  bool found = false;  // false when every evaluation was below resolution
  std::vector<TraceRow> trace;
};

/// Bounded Nelder-Mead on the verify_fund ratio, restarted from the best
/// vertex until `budget` evaluations are spent. Deterministic.
ProbeResult probe(const ProbeSetup& setup);

/// Exhaustive scan over the product of per-parameter value lists.
std::vector<TraceRow> ratio_surface(const ProbeSetup& setup, const std::vector<std::vector<double>>& lattice);

/// params..., lhs, rhs_scale, ratio, status, grid
void write_trace_csv(std::ostream& os, Family f, const std::vector<TraceRow>& rows);

/// Minimises `f` inside [lo, hi] (coordinates clamped), at most `budget`
/// evaluations. Returns the best point; `on_eval` sees every evaluation.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                const std::vector<double>& lo, const std::vector<double>& hi, int budget,
                                double tol = 1e-7);

}  // namespace cilab
