#pragma once

#include <vector>

#include "xirho/rearrange.hpp"

namespace xirho {

/// Discretized maximization of the rho functional over conditional
/// distribution families h[j][i] in [0, 1] with row means v_j and
/// 6 * mean(h^2) - 2 <= c. Cells and levels sit at midpoints.
struct DiscreteProblem {
  int n_t = 200;
  int n_v = 200;
  double c = 0.3;
};

struct OracleRow {
  double v = 0.0;
  /// Where the unclamped ramp reaches 1 (may be negative).
  double plateau_end = 0.0;
  /// Where the unclamped ramp reaches 0 (may exceed 1).
  double root = 0.0;
  /// Least-squares slope over the cells strictly inside (0, 1); NaN with fewer than two.
  double slope = 0.0;
  int ramp_cells = 0;
};

struct OracleSolution {
  GridH h;
  /// 12 * mean((1 - t_i) h) - 3.
  double objective = 0.0;
  /// 6 * mean(h^2) - 2 at the solution.
  double xi = 0.0;
  /// Multiplier of the quadratic constraint.
  double mu = 0.0;
  /// Multipliers of the row-mean constraints.
  std::vector<double> row_multipliers;
  std::vector<OracleRow> rows;
  /// Slope pooled over all ramp cells after removing per-row intercepts.
  double common_slope = 0.0;
  /// Largest relative deviation of a row slope from common_slope.
  double slope_spread = 0.0;
  double max_row_mean_residual = 0.0;
  /// Whether rows came out pointwise nondecreasing in v (never imposed).
  bool monotone_in_v = true;
};

/// Maximizer of sum 2 (1 - t_i) h_i - mu h_i^2 - gamma h_i over [0, 1]^n_t:
/// h_i = clamp((1 - gamma/2 - t_i) / mu, 0, 1).
std::vector<double> solve_row(double mu, double gamma, int n_t);

/// gamma with mean(solve_row(mu, gamma, n_t)) = v within 1e-12. For v = 0
/// the smallest gamma giving a zero row, for v = 1 the largest giving ones.
double calibrate_gamma(double mu, double v, int n_t);

/// Smallest and largest xi reachable by solve_row families on the grid.
struct BudgetRange {
  double lo = 0.0;
  double hi = 0.0;
};
BudgetRange achievable_budget(int n_t, int n_v);

/// Outer bisection on mu so the quadratic constraint is active. Throws
/// InfeasibleBudget when c is outside achievable_budget.
OracleSolution solve(const DiscreteProblem& problem);

struct ProjectedGradientResult {
  double objective = 0.0;
  GridH h;
  int iterations = 0;
  /// Whether the monotone-in-v projection ever changed an iterate.
  bool monotone_constraint_active = false;
};

/// Independent check: projected gradient ascent from h[j][i] = v_j with
/// geometrically growing steps. The projection is exact onto box, row means
/// and the xi ball, alternated (Dykstra) with the monotone-in-v cone when
/// needed. Throws ProjectionNotConverged after 1e4 sweeps.
ProjectedGradientResult cross_check_projected_gradient(const DiscreteProblem& problem, int iters = 60);

}  // namespace xirho
