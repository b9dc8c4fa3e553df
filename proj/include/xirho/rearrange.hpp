#pragma once

#include <span>
#include <vector>

#include "xirho/copula.hpp"

namespace xirho {

/// Discretized family of conditional distributions h_v(t). Row j holds the
/// n_t cell values of h_{v_j} on the uniform partition of [0, 1]; values are
/// stored row-major.
struct GridH {
  int n_t = 0;
  int n_v = 0;
  std::vector<double> values;
  std::vector<double> v_levels;

  GridH() = default;
  GridH(int n_t, int n_v, std::vector<double> values, std::vector<double> v_levels);

  double at(int j, int i) const { return values[static_cast<std::size_t>(j) * n_t + i]; }
  double& at(int j, int i) { return values[static_cast<std::size_t>(j) * n_t + i]; }
  std::span<const double> row(int j) const {
    return {values.data() + static_cast<std::size_t>(j) * n_t, static_cast<std::size_t>(n_t)};
  }
  std::span<double> row(int j) { return {values.data() + static_cast<std::size_t>(j) * n_t, static_cast<std::size_t>(n_t)}; }

  double t_mid(int i) const { return (i + 0.5) / n_t; }

  /// C(k / n_t, v_j) for k = 0..n_t, row-major with n_t + 1 columns.
  std::vector<double> cdf_values() const;
  /// 6 * mean(h^2) - 2.
  double xi() const;
  /// 12 * int int C - 3 for the piecewise-constant profiles.
  double rho() const;
};

/// Midpoint levels v_j = (j + 1/2) / n_v.
std::vector<double> midpoint_levels(int n);

/// Cell averages n_t * (C(t_{i+1}, v_j) - C(t_i, v_j)); row means are then
/// exact up to round-off. Throws GridInconsistent if a row mean needs a
/// correction above 1e-6.
GridH grid_from_model(const CopulaModel& model, int n_t, int n_v);

/// Sorted nonincreasing copy.
std::vector<double> decreasing_rearrangement(std::span<const double> row);

enum class Direction { Up, Down };

/// Up sorts every row nonincreasing (the SI representative), Down sorts
/// nondecreasing (SD).
GridH rearranged_copula(const GridH& grid, Direction direction);

enum class SchurOrder {
  Leq,           // first <= second
  Geq,           // second <= first, not first <= second
  Incomparable,
};

/// Prefix sums of the decreasing rearrangements compared row by row.
/// tol <= 0 selects the default 1e-8 * n_t.
SchurOrder schur_compare(const GridH& first, const GridH& second, double tol = 0.0);

struct DependenceFlags {
  bool si = false;
  bool sd = false;
  bool plod = false;
};

DependenceFlags classify_dependence(const GridH& grid, double tol = 1e-9);

/// Piecewise-constant function on [0, 1]; edges run from 0 to 1 and
/// values.size() == edges.size() - 1.
struct StepFunction {
  std::vector<double> edges;
  std::vector<double> values;

  double integral() const;
};

/// F_v(h) = int (2 (1 - t) h(t) - h(t)^2) dt, exact for step functions.
double fv_functional(const StepFunction& h);

}  // namespace xirho
