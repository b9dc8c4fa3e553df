#include "xirho/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "xirho/error.hpp"
#include "xirho/numerics.hpp"

namespace xirho {

GridH::GridH(int n_t_, int n_v_, std::vector<double> values_, std::vector<double> v_levels_)
    : n_t(n_t_), n_v(n_v_), values(std::move(values_)), v_levels(std::move(v_levels_)) {
  if (n_t <= 0 || n_v <= 0 || values.size() != static_cast<std::size_t>(n_t) * n_v ||
      v_levels.size() != static_cast<std::size_t>(n_v)) {
    throw Error(ErrorCode::DimensionMismatch, "GridH: values must be n_v x n_t and v_levels of length n_v");
  }
}

std::vector<double> GridH::cdf_values() const {
  std::vector<double> out(static_cast<std::size_t>(n_v) * (n_t + 1));
  const double dt = 1.0 / n_t;
  for (int j = 0; j < n_v; ++j) {
    double* dst = out.data() + static_cast<std::size_t>(j) * (n_t + 1);
    double acc = 0.0;
    dst[0] = 0.0;
    for (int i = 0; i < n_t; ++i) {
      acc += at(j, i) * dt;
      dst[i + 1] = acc;
    }
  }
  return out;
}

double GridH::xi() const {
  std::vector<double> sq(values.size());
  std::transform(values.begin(), values.end(), sq.begin(), [](double h) { return h * h; });
  return 6.0 * pairwise_sum(sq) / static_cast<double>(values.size()) - 2.0;
}

double GridH::rho() const {
  std::vector<double> terms(values.size());
  for (int j = 0; j < n_v; ++j) {
    for (int i = 0; i < n_t; ++i) {
      terms[static_cast<std::size_t>(j) * n_t + i] = (1.0 - t_mid(i)) * at(j, i);
    }
  }
  return 12.0 * pairwise_sum(terms) / static_cast<double>(values.size()) - 3.0;
}

std::vector<double> midpoint_levels(int n) {
  std::vector<double> out(n);
  for (int j = 0; j < n; ++j) out[j] = (j + 0.5) / n;
  return out;
}

GridH grid_from_model(const CopulaModel& model, int n_t, int n_v) {
  if (n_t < 1 || n_v < 1) throw Error(ErrorCode::DimensionMismatch, "grid_from_model: empty grid");
  auto levels = midpoint_levels(n_v);
  std::vector<double> values(static_cast<std::size_t>(n_t) * n_v);
  for (int j = 0; j < n_v; ++j) {
    const double v = levels[j];
    double prev = 0.0;
    double* row = values.data() + static_cast<std::size_t>(j) * n_t;
    for (int i = 0; i < n_t; ++i) {
      const double next = i + 1 == n_t ? model.cdf(1.0, v) : model.cdf(static_cast<double>(i + 1) / n_t, v);
      row[i] = std::clamp((next - prev) * n_t, 0.0, 1.0);
      prev = next;
    }
    const double mean = pairwise_sum(std::span<const double>(row, n_t)) / n_t;
    const double correction = v - mean;
    if (std::abs(correction) > 1e-6) {
      throw Error(ErrorCode::GridInconsistent, "row mean " + std::to_string(mean) + " differs from v=" +
                                                   std::to_string(v) + " by more than 1e-6");
    }
    for (int i = 0; i < n_t; ++i) row[i] = std::clamp(row[i] + correction, 0.0, 1.0);
  }
  return GridH(n_t, n_v, std::move(values), std::move(levels));
}

std::vector<double> decreasing_rearrangement(std::span<const double> row) {
  std::vector<double> out(row.begin(), row.end());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

GridH rearranged_copula(const GridH& grid, Direction direction) {
  GridH out = grid;
  for (int j = 0; j < out.n_v; ++j) {
    auto r = out.row(j);
    if (direction == Direction::Up) {
      std::sort(r.begin(), r.end(), std::greater<>());
    } else {
      std::sort(r.begin(), r.end());
    }
  }
  return out;
}

namespace {

// first <=_S second on every row
bool schur_leq_rows(const GridH& first, const GridH& second, double tol) {
  for (int j = 0; j < first.n_v; ++j) {
    const auto a = decreasing_rearrangement(first.row(j));
    const auto b = decreasing_rearrangement(second.row(j));
    double sa = 0.0;
    double sb = 0.0;
    for (int i = 0; i < first.n_t; ++i) {
      sa += a[i];
      sb += b[i];
      if (sa > sb + tol) return false;
    }
    if (std::abs(sa - sb) > tol) return false;
  }
  return true;
}

}  // namespace

SchurOrder schur_compare(const GridH& first, const GridH& second, double tol) {
  if (first.n_t != second.n_t || first.n_v != second.n_v) {
    throw Error(ErrorCode::DimensionMismatch, "schur_compare: grids have different shapes");
  }
  if (tol <= 0.0) tol = 1e-8 * first.n_t;
  if (schur_leq_rows(first, second, tol)) return SchurOrder::Leq;
  if (schur_leq_rows(second, first, tol)) return SchurOrder::Geq;
  return SchurOrder::Incomparable;
}

DependenceFlags classify_dependence(const GridH& grid, double tol) {
  DependenceFlags flags{true, true, true};
  for (int j = 0; j < grid.n_v && (flags.si || flags.sd); ++j) {
    const auto r = grid.row(j);
    for (int i = 0; i + 1 < grid.n_t; ++i) {
      if (r[i + 1] > r[i] + tol) flags.si = false;
      if (r[i + 1] < r[i] - tol) flags.sd = false;
    }
  }
  const auto cdf = grid.cdf_values();
  for (int j = 0; j < grid.n_v && flags.plod; ++j) {
    for (int k = 0; k <= grid.n_t; ++k) {
      const double u = static_cast<double>(k) / grid.n_t;
      if (cdf[static_cast<std::size_t>(j) * (grid.n_t + 1) + k] < u * grid.v_levels[j] - tol) {
        flags.plod = false;
        break;
      }
    }
  }
  return flags;
}

double StepFunction::integral() const {
  double total = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) total += values[k] * (edges[k + 1] - edges[k]);
  return total;
}

double fv_functional(const StepFunction& h) {
  if (h.edges.size() != h.values.size() + 1) {
    throw Error(ErrorCode::DimensionMismatch, "StepFunction: edges must have one more entry than values");
  }
  std::vector<double> terms(h.values.size());
  for (std::size_t k = 0; k < h.values.size(); ++k) {
    const double a = h.edges[k];
    const double b = h.edges[k + 1];
    const double lin = (b - a) - 0.5 * (b * b - a * a);  // int_a^b (1 - t) dt
    terms[k] = 2.0 * h.values[k] * lin - h.values[k] * h.values[k] * (b - a);
  }
  return pairwise_sum(terms);
}

}  // namespace xirho
