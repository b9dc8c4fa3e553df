#include "xirho/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "xirho/error.hpp"
#include "xirho/numerics.hpp"

namespace xirho {

namespace {

double row_mean(std::span<const double> row) { return pairwise_sum(row) / static_cast<double>(row.size()); }

// Writes clamp(z_i - tau, 0, 1) into out with tau chosen so the mean is v,
// and returns tau. The bracketed search is polished by solving the linear
// equation on the final active set, which is exact once the set is right.
double shift_to_mean(std::span<const double> z, double v, std::span<double> out) {
  const std::size_t n = z.size();
  const auto [zmin_it, zmax_it] = std::minmax_element(z.begin(), z.end());
  const double target = v * static_cast<double>(n);
  auto fill = [&](double tau) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::clamp(z[i] - tau, 0.0, 1.0);
  };
  auto residual = [&](double tau) {
    fill(tau);
    return row_mean(out) - v;
  };
  double tau;
  try {
    tau = find_root(residual, *zmin_it - 1.0, *zmax_it, 1e-15);
  } catch (const Error&) {
    throw Error(ErrorCode::BracketFailed, "row mean " + std::to_string(v) + " cannot be reached by a shifted clamp");
  }
  for (int polish = 0; polish < 4; ++polish) {
    double ramp_sum = 0.0;
    double ones = 0.0;
    std::size_t ramp = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = z[i] - tau;
      if (d >= 1.0) {
        ones += 1.0;
      } else if (d > 0.0) {
        ramp_sum += z[i];
        ++ramp;
      }
    }
    if (ramp == 0) break;
    const double next = (ramp_sum + ones - target) / static_cast<double>(ramp);
    if (std::abs(residual(next)) > std::abs(residual(tau))) break;
    if (next == tau) break;
    tau = next;
  }
  fill(tau);
  return tau;
}

double mid(int i, int n) { return (i + 0.5) / n; }

// Rows for a fixed mu, with their multipliers.
struct RowFamily {
  std::vector<double> values;
  std::vector<double> gammas;
};

RowFamily rows_for_mu(double mu, int n_t, const std::vector<double>& levels) {
  const int n_v = static_cast<int>(levels.size());
  RowFamily fam;
  fam.values.resize(static_cast<std::size_t>(n_t) * n_v);
  fam.gammas.resize(n_v);
  std::vector<double> z(n_t);
  for (int i = 0; i < n_t; ++i) z[i] = (1.0 - mid(i, n_t)) / mu;
  for (int j = 0; j < n_v; ++j) {
    std::span<double> out(fam.values.data() + static_cast<std::size_t>(j) * n_t, n_t);
    fam.gammas[j] = 2.0 * mu * shift_to_mean(z, levels[j], out);
  }
  return fam;
}

double xi_of(std::span<const double> values) {
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [](double h) { return h * h; });
  return 6.0 * pairwise_sum(sq) / static_cast<double>(values.size()) - 2.0;
}

double objective_of(std::span<const double> values, int n_t) {
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) terms[k] = (1.0 - mid(static_cast<int>(k % n_t), n_t)) * values[k];
  return 12.0 * pairwise_sum(terms) / static_cast<double>(values.size()) - 3.0;
}

}  // namespace

std::vector<double> solve_row(double mu, double gamma, int n_t) {
  if (!(mu > 0.0)) throw Error(ErrorCode::DomainError, "solve_row requires mu > 0");
  std::vector<double> h(n_t);
  for (int i = 0; i < n_t; ++i) h[i] = std::clamp((1.0 - 0.5 * gamma - mid(i, n_t)) / mu, 0.0, 1.0);
  return h;
}

double calibrate_gamma(double mu, double v, int n_t) {
  if (!(mu > 0.0)) throw Error(ErrorCode::DomainError, "calibrate_gamma requires mu > 0");
  if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::BracketFailed, "row mean must lie in [0,1]");
  if (v == 0.0 || v == 1.0) {
    // nudge past round-off so the row is exactly 0 or 1
    double gamma = v == 0.0 ? 2.0 * (1.0 - mid(0, n_t)) : 2.0 * (1.0 - mid(n_t - 1, n_t) - mu);
    const double toward = v == 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    auto done = [&] {
      const auto row = solve_row(mu, gamma, n_t);
      return v == 0.0 ? row.front() == 0.0 : row.back() == 1.0;
    };
    for (int k = 0; k < 64 && !done(); ++k) gamma = std::nextafter(gamma, toward);
    return gamma;
  }
  std::vector<double> z(n_t);
  std::vector<double> out(n_t);
  for (int i = 0; i < n_t; ++i) z[i] = (1.0 - mid(i, n_t)) / mu;
  return 2.0 * mu * shift_to_mean(z, v, out);
}

BudgetRange achievable_budget(int n_t, int n_v) {
  const auto levels = midpoint_levels(n_v);
  std::vector<double> flat(n_v);
  std::vector<double> step(n_v);
  for (int j = 0; j < n_v; ++j) {
    const double v = levels[j];
    flat[j] = v * v;
    const double cells = v * n_t;
    const double full = std::floor(cells);
    const double frac = cells - full;
    step[j] = (full + frac * frac) / n_t;
  }
  return {6.0 * pairwise_sum(flat) / n_v - 2.0, 6.0 * pairwise_sum(step) / n_v - 2.0};
}

OracleSolution solve(const DiscreteProblem& problem) {
  const int n_t = problem.n_t;
  const int n_v = problem.n_v;
  if (n_t < 2 || n_v < 1) throw Error(ErrorCode::DimensionMismatch, "oracle grid must have n_t >= 2 and n_v >= 1");
  const BudgetRange range = achievable_budget(n_t, n_v);
  const double c = problem.c;
  if (!(c > range.lo && c < range.hi)) {
    throw Error(ErrorCode::InfeasibleBudget, "budget c=" + std::to_string(c) + " outside achievable range (" +
                                                 std::to_string(range.lo) + ", " + std::to_string(range.hi) + ")");
  }
  const auto levels = midpoint_levels(n_v);
  auto excess = [&](double log_mu) { return xi_of(rows_for_mu(std::exp(log_mu), n_t, levels).values) - c; };

  // xi decreases in mu; widen until the budget is bracketed.
  double lo = 0.0;
  double hi = 0.0;
  while (excess(lo) < 0.0) {
    lo -= 2.0;
    if (lo < -60.0) throw Error(ErrorCode::InfeasibleBudget, "budget too close to the discrete maximum");
  }
  hi = lo + 2.0;
  while (excess(hi) > 0.0) {
    hi += 2.0;
    if (hi > 60.0) throw Error(ErrorCode::InfeasibleBudget, "budget too close to the discrete minimum");
  }
  const double mu = std::exp(find_root(excess, lo, hi, 1e-14));

  RowFamily fam = rows_for_mu(mu, n_t, levels);
  OracleSolution sol;
  sol.mu = mu;
  sol.row_multipliers = fam.gammas;
  sol.h = GridH(n_t, n_v, std::move(fam.values), levels);
  sol.objective = objective_of(sol.h.values, n_t);
  sol.xi = xi_of(sol.h.values);

  double sxy = 0.0;
  double sxx = 0.0;
  sol.rows.resize(n_v);
  for (int j = 0; j < n_v; ++j) {
    OracleRow& row = sol.rows[j];
    const double knee = 1.0 - 0.5 * sol.row_multipliers[j];
    row.v = levels[j];
    row.root = knee;
    row.plateau_end = knee - mu;
    const auto r = sol.h.row(j);
    sol.max_row_mean_residual = std::max(sol.max_row_mean_residual, std::abs(row_mean(r) - row.v));

    double tbar = 0.0;
    double hbar = 0.0;
    for (int i = 0; i < n_t; ++i) {
      if (r[i] > 0.0 && r[i] < 1.0) {
        tbar += mid(i, n_t);
        hbar += r[i];
        ++row.ramp_cells;
      }
    }
    if (row.ramp_cells < 2) {
      row.slope = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    tbar /= row.ramp_cells;
    hbar /= row.ramp_cells;
    double rxy = 0.0;
    double rxx = 0.0;
    for (int i = 0; i < n_t; ++i) {
      if (r[i] > 0.0 && r[i] < 1.0) {
        const double dt = mid(i, n_t) - tbar;
        rxy += dt * (r[i] - hbar);
        rxx += dt * dt;
      }
    }
    row.slope = rxy / rxx;
    sxy += rxy;
    sxx += rxx;
  }
  sol.common_slope = sxx > 0.0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : sol.rows) {
    if (row.ramp_cells >= 2) {
      sol.slope_spread = std::max(sol.slope_spread, std::abs(row.slope / sol.common_slope - 1.0));
    }
  }
  for (int j = 0; j + 1 < n_v && sol.monotone_in_v; ++j) {
    for (int i = 0; i < n_t; ++i) {
      if (sol.h.at(j + 1, i) < sol.h.at(j, i) - 1e-12) {
        sol.monotone_in_v = false;
        break;
      }
    }
  }
  return sol;
}

namespace {

class FeasibleSetProjector {
 public:
  FeasibleSetProjector(int n_t, int n_v, double c)
      : n_t_(n_t), n_v_(n_v), levels_(midpoint_levels(n_v)),
        radius_sq_(static_cast<double>(n_t) * n_v * (c + 2.0) / 6.0) {}

  // Projection onto box, row means and the xi ball (without the cone).
  std::vector<double> onto_ball_set(const std::vector<double>& z) const {
    std::vector<double> y(z.size());
    auto norm_gap = [&](double log_theta) {
      scaled_rows(z, std::exp(log_theta), y);
      return (sum_sq(y) - radius_sq_) / radius_sq_;
    };
    if (norm_gap(0.0) <= 0.0) return y;
    // Scaling z by theta = 1 / (1 + lambda) shrinks the projected norm.
    double lo = -1.0;
    while (norm_gap(lo) > 0.0) {
      lo *= 2.0;
      if (lo < -700.0) throw Error(ErrorCode::ProjectionNotConverged, "xi ball is empty on this grid");
    }
    double log_theta = find_root(norm_gap, lo, 0.0, 1e-15);
    if (norm_gap(log_theta) > 0.0) {
      // keep the feasible side of the bracket
      for (double step = 1e-15; norm_gap(log_theta) > 0.0; step *= 2.0) log_theta -= step;
    }
    scaled_rows(z, std::exp(log_theta), y);
    return y;
  }

  // Largest amount by which a column decreases in v.
  double cone_violation(const std::vector<double>& y) const {
    double worst = 0.0;
    for (int j = 0; j + 1 < n_v_; ++j) {
      for (int i = 0; i < n_t_; ++i) worst = std::max(worst, at(y, j, i) - at(y, j + 1, i));
    }
    return worst;
  }

  // Isotonic (nondecreasing in v) regression of every column.
  void onto_cone(std::vector<double>& y) const {
    std::vector<double> block_sum;
    std::vector<int> block_len;
    for (int i = 0; i < n_t_; ++i) {
      block_sum.clear();
      block_len.clear();
      for (int j = 0; j < n_v_; ++j) {
        block_sum.push_back(at(y, j, i));
        block_len.push_back(1);
        while (block_sum.size() > 1) {
          const std::size_t k = block_sum.size() - 1;
          if (block_sum[k - 1] / block_len[k - 1] <= block_sum[k] / block_len[k]) break;
          block_sum[k - 1] += block_sum[k];
          block_len[k - 1] += block_len[k];
          block_sum.pop_back();
          block_len.pop_back();
        }
      }
      int j = 0;
      for (std::size_t b = 0; b < block_sum.size(); ++b) {
        const double mean = block_sum[b] / block_len[b];
        for (int k = 0; k < block_len[b]; ++k, ++j) y[static_cast<std::size_t>(j) * n_t_ + i] = mean;
      }
    }
  }

  // Full projection; Dykstra's alternation only when the cone is violated.
  std::vector<double> project(const std::vector<double>& z, bool& cone_used) const {
    std::vector<double> a = onto_ball_set(z);
    if (cone_violation(a) <= 1e-12) return a;
    cone_used = true;
    std::vector<double> y = z;
    std::vector<double> p(z.size(), 0.0);
    std::vector<double> q(z.size(), 0.0);
    std::vector<double> shifted(z.size());
    for (int sweep = 0; sweep < 10000; ++sweep) {
      for (std::size_t k = 0; k < z.size(); ++k) shifted[k] = y[k] + p[k];
      a = onto_ball_set(shifted);
      for (std::size_t k = 0; k < z.size(); ++k) p[k] = shifted[k] - a[k];
      std::vector<double> b(z.size());
      for (std::size_t k = 0; k < z.size(); ++k) b[k] = a[k] + q[k];
      onto_cone(b);
      double change = 0.0;
      for (std::size_t k = 0; k < z.size(); ++k) {
        q[k] = a[k] + q[k] - b[k];
        change = std::max(change, std::abs(b[k] - y[k]));
      }
      y = std::move(b);
      if (change < 1e-10 && cone_violation(a) < 1e-10) return a;
    }
    throw Error(ErrorCode::ProjectionNotConverged, "alternating projections did not converge in 10000 sweeps");
  }

 private:
  double at(const std::vector<double>& y, int j, int i) const { return y[static_cast<std::size_t>(j) * n_t_ + i]; }

  void scaled_rows(const std::vector<double>& z, double theta, std::vector<double>& y) const {
    std::vector<double> row(n_t_);
    for (int j = 0; j < n_v_; ++j) {
      const std::size_t off = static_cast<std::size_t>(j) * n_t_;
      for (int i = 0; i < n_t_; ++i) row[i] = theta * z[off + i];
      shift_to_mean(row, levels_[j], std::span<double>(y.data() + off, n_t_));
    }
  }

  static double sum_sq(const std::vector<double>& y) {
    std::vector<double> sq(y.size());
    std::transform(y.begin(), y.end(), sq.begin(), [](double h) { return h * h; });
    return pairwise_sum(sq);
  }

  int n_t_;
  int n_v_;
  std::vector<double> levels_;
  double radius_sq_;
};

}  // namespace

ProjectedGradientResult cross_check_projected_gradient(const DiscreteProblem& problem, int iters) {
  const int n_t = problem.n_t;
  const int n_v = problem.n_v;
  if (n_t < 2 || n_v < 1) throw Error(ErrorCode::DimensionMismatch, "oracle grid must have n_t >= 2 and n_v >= 1");
  const BudgetRange range = achievable_budget(n_t, n_v);
  if (!(problem.c > range.lo && problem.c < range.hi)) {
    throw Error(ErrorCode::InfeasibleBudget, "budget c=" + std::to_string(problem.c) + " outside achievable range");
  }
  const FeasibleSetProjector projector(n_t, n_v, problem.c);
  const auto levels = midpoint_levels(n_v);
  const std::size_t size = static_cast<std::size_t>(n_t) * n_v;

  std::vector<double> x(size);
  for (int j = 0; j < n_v; ++j) std::fill_n(x.begin() + static_cast<std::ptrdiff_t>(j) * n_t, n_t, levels[j]);
  // Objective gradient scaled by the cell count, so a unit step moves cells by O(1).
  std::vector<double> grad(size);
  for (std::size_t k = 0; k < size; ++k) grad[k] = 12.0 * (1.0 - mid(static_cast<int>(k % n_t), n_t));

  ProjectedGradientResult result;
  result.objective = objective_of(x, n_t);
  result.h = GridH(n_t, n_v, x, levels);
  // The objective is linear, so there is no curvature to set a step length;
  // steps grow geometrically and the iterates approach the maximizer.
  double step = 1.0 / 12.0;
  std::vector<double> z(size);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t k = 0; k < size; ++k) z[k] = x[k] + step * grad[k];
    std::vector<double> next = projector.project(z, result.monotone_constraint_active);
    double change = 0.0;
    for (std::size_t k = 0; k < size; ++k) change = std::max(change, std::abs(next[k] - x[k]));
    x = std::move(next);
    result.iterations = it + 1;
    const double obj = objective_of(x, n_t);
    if (obj > result.objective) {
      result.objective = obj;
      result.h = GridH(n_t, n_v, x, levels);
    }
    if (step >= 1e12 && change < 1e-12) break;
    step = std::min(step * 2.0, 1e12);
  }
  return result;
}

}  // namespace xirho
