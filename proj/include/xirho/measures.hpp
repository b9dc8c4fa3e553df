#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "xirho/copula.hpp"

namespace xirho {

enum class Method { ClosedForm, Quadrature, MonteCarlo, RankEstimator };

std::string_view method_name(Method method);

struct MeasureResult {
  double xi = 0.0;
  double rho = 0.0;
  Method method = Method::ClosedForm;
  /// Method-dependent error estimate; 0 for closed forms.
  double err = 0.0;
};

/// Composite tensor Gauss-Legendre settings. Panels are split further at the
/// model's kink locations.
struct QuadratureOptions {
  int nodes = 64;
  int panels = 4;
  /// QuadratureNotConverged is thrown when the n vs 2n difference exceeds this.
  double tolerance = std::numeric_limits<double>::infinity();
};

struct QuadratureEstimate {
  double value = 0.0;
  double err = 0.0;
};

double rho_closed_cb(double b);
double xi_closed_cb(double b);

/// Integral over [0,1]^2 of f(t, v); the inner t-panels follow model.t_breaks(v)
/// and the outer v-panels follow model.v_breaks().
double integrate_unit_square(const CopulaModel& model, const std::function<double(double, double)>& f,
                             int nodes, int panels);

/// 12 * int C - 3 at a single resolution.
double rho_integral(const CopulaModel& model, int nodes = 64, int panels = 4);
/// 6 * int (d1 C)^2 - 2 at a single resolution.
double xi_integral(const CopulaModel& model, int nodes = 64, int panels = 4);

/// Spearman's rho by quadrature; err compares `nodes` against `2 * nodes`.
QuadratureEstimate rho_quadrature(const CopulaModel& model, const QuadratureOptions& options = {});
/// Chatterjee's xi by quadrature; err compares `nodes` against `2 * nodes`.
QuadratureEstimate xi_quadrature(const CopulaModel& model, const QuadratureOptions& options = {});

/// Both measures by quadrature, clamped into their ranges when the excursion is
/// pure round-off.
MeasureResult measures_quadrature(const CopulaModel& model, const QuadratureOptions& options = {});

/// Closed form; available for Pi, M, W, Cb, the PLOD example and Gaussian.
MeasureResult measures_closed(const CopulaSpec& spec);
bool has_closed_form(const CopulaSpec& spec);

struct Sample {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
};

/// Conditional distribution method: U uniform, V = h^{-1}(U, W).
Sample sample(const CopulaModel& model, std::size_t n, std::uint64_t seed);

/// Chatterjee's rank estimator. Ties in x are broken by a random order drawn
/// from `tie_seed`; ties in y use the general max-rank formula.
double xi_n(const Sample& sample, std::uint64_t tie_seed = 0);
/// Pearson correlation of average ranks.
double rho_n(const Sample& sample);

MeasureResult measures_monte_carlo(const CopulaModel& model, std::size_t n, std::uint64_t seed);

struct ParamGrid {
  double lo = 0.0;
  double hi = 1.0;
  int points = 25;
};

struct GapMaximum {
  Family family = Family::Cb;
  double param = 0.0;
  double rho = 0.0;
  double xi = 0.0;
  double gap = 0.0;
};

/// Reference gap-maximizing rows (3 decimals) for Cb, Clayton, Frank,
/// Gaussian, Gumbel and Joe, in that order.
std::vector<GapMaximum> reference_gap_maxima();

/// Search interval used for each family's gap maximization.
ParamGrid default_gap_grid(Family family);

/// Grid search for the maximizer of rho - xi over the family parameter,
/// refined by golden-section search to `param_tol`.
GapMaximum table1_search(Family family, const ParamGrid& grid, int nodes = 64, double param_tol = 1e-4);

}  // namespace xirho
