#include "xirho/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "xirho/error.hpp"
#include "xirho/numerics.hpp"

namespace xirho {

std::string_view method_name(Method method) {
  switch (method) {
    case Method::ClosedForm: return "closed";
    case Method::Quadrature: return "quad";
    case Method::MonteCarlo: return "mc";
    case Method::RankEstimator: return "rank";
  }
  return "unknown";
}

double rho_closed_cb(double b) {
  if (b == 0.0) throw Error(ErrorCode::ParamOutOfRange, "b=0 violates b != 0");
  const double ab = std::abs(b);
  const double sign = b > 0.0 ? 1.0 : -1.0;
  if (ab <= 1.0) return sign * (ab - 3.0 * b * b / 10.0);
  return sign * (1.0 - 1.0 / (2.0 * b * b) + 1.0 / (5.0 * ab * ab * ab));
}

double xi_closed_cb(double b) {
  if (b == 0.0) throw Error(ErrorCode::ParamOutOfRange, "b=0 violates b != 0");
  const double ab = std::abs(b);
  if (ab <= 1.0) return b * b * (5.0 - 2.0 * ab) / 10.0;
  return 1.0 - 1.0 / ab + 3.0 / (10.0 * b * b);
}

double integrate_unit_square(const CopulaModel& model, const std::function<double(double, double)>& f, int nodes,
                             int panels) {
  const QuadRule& rule = cached_gauss_legendre(nodes);
  const auto v_breaks = model.v_breaks();
  const auto v_edges = panel_edges(0.0, 1.0, panels, v_breaks);
  std::vector<double> outer_sums;
  outer_sums.reserve(v_edges.size());
  std::vector<double> inner_sums;
  for (std::size_t pv = 0; pv + 1 < v_edges.size(); ++pv) {
    const double v_half = 0.5 * (v_edges[pv + 1] - v_edges[pv]);
    const double v_mid = 0.5 * (v_edges[pv + 1] + v_edges[pv]);
    double panel_sum = 0.0;
    for (std::size_t iv = 0; iv < rule.nodes.size(); ++iv) {
      const double v = v_mid + v_half * rule.nodes[iv];
      const auto t_breaks = model.t_breaks(v);
      const auto t_edges = panel_edges(0.0, 1.0, panels, t_breaks);
      inner_sums.clear();
      for (std::size_t pt = 0; pt + 1 < t_edges.size(); ++pt) {
        const double t_half = 0.5 * (t_edges[pt + 1] - t_edges[pt]);
        const double t_mid = 0.5 * (t_edges[pt + 1] + t_edges[pt]);
        double s = 0.0;
        for (std::size_t it = 0; it < rule.nodes.size(); ++it) {
          s += rule.weights[it] * f(t_mid + t_half * rule.nodes[it], v);
        }
        inner_sums.push_back(t_half * s);
      }
      panel_sum += rule.weights[iv] * pairwise_sum(inner_sums);
    }
    outer_sums.push_back(v_half * panel_sum);
  }
  return pairwise_sum(outer_sums);
}

double rho_integral(const CopulaModel& model, int nodes, int panels) {
  const double integral =
      integrate_unit_square(model, [&](double u, double v) { return model.cdf(u, v); }, nodes, panels);
  return 12.0 * integral - 3.0;
}

double xi_integral(const CopulaModel& model, int nodes, int panels) {
  const double integral = integrate_unit_square(
      model,
      [&](double t, double v) {
        const double h = model.d1(t, v);
        return h * h;
      },
      nodes, panels);
  return 6.0 * integral - 2.0;
}

namespace {

void check_nodes(const QuadratureOptions& options) {
  if (options.nodes < 16 || 2 * options.nodes > 512) {
    throw Error(ErrorCode::DomainError, "quadrature nodes must lie in [16, 256]");
  }
  if (options.panels < 1) throw Error(ErrorCode::DomainError, "quadrature panels must be positive");
}

QuadratureEstimate refine(const std::function<double(int)>& eval, const QuadratureOptions& options,
                          const char* what) {
  check_nodes(options);
  const double coarse = eval(options.nodes);
  const double fine = eval(2 * options.nodes);
  QuadratureEstimate out{fine, std::abs(fine - coarse)};
  if (out.err > options.tolerance) {
    throw Error(ErrorCode::QuadratureNotConverged, std::string(what) + ": estimated error " +
                                                       std::to_string(out.err) + " exceeds tolerance " +
                                                       std::to_string(options.tolerance));
  }
  return out;
}

double clamp_roundoff(double value, double lo, double hi, const char* what) {
  constexpr double slack = 1e-10;
  if (value < lo - slack || value > hi + slack) {
    throw Error(ErrorCode::QuadratureNotConverged,
                std::string(what) + " = " + std::to_string(value) + " outside its range");
  }
  return std::clamp(value, lo, hi);
}

}  // namespace

QuadratureEstimate rho_quadrature(const CopulaModel& model, const QuadratureOptions& options) {
  return refine([&](int n) { return rho_integral(model, n, options.panels); }, options, "rho quadrature");
}

QuadratureEstimate xi_quadrature(const CopulaModel& model, const QuadratureOptions& options) {
  return refine([&](int n) { return xi_integral(model, n, options.panels); }, options, "xi quadrature");
}

MeasureResult measures_quadrature(const CopulaModel& model, const QuadratureOptions& options) {
  const auto xi = xi_quadrature(model, options);
  const auto rho = rho_quadrature(model, options);
  MeasureResult out;
  out.xi = clamp_roundoff(xi.value, 0.0, 1.0, "xi");
  out.rho = clamp_roundoff(rho.value, -1.0, 1.0, "rho");
  out.method = Method::Quadrature;
  out.err = std::max(xi.err, rho.err);
  return out;
}

bool has_closed_form(const CopulaSpec& spec) {
  switch (spec.family) {
    case Family::Pi:
    case Family::M:
    case Family::W:
    case Family::Cb:
    case Family::PlodExample:
    case Family::Gaussian:
      return true;
    default:
      return false;
  }
}

MeasureResult measures_closed(const CopulaSpec& spec) {
  validate(spec);
  MeasureResult out;
  out.method = Method::ClosedForm;
  switch (spec.family) {
    case Family::Pi:
      out.xi = 0.0;
      out.rho = 0.0;
      break;
    case Family::M:
      out.xi = 1.0;
      out.rho = 1.0;
      break;
    case Family::W:
      out.xi = 1.0;
      out.rho = -1.0;
      break;
    case Family::Cb:
      out.xi = xi_closed_cb(spec.param("b"));
      out.rho = rho_closed_cb(spec.param("b"));
      break;
    case Family::PlodExample:
      out.xi = 1.0;
      out.rho = 13.0 / 16.0;
      break;
    case Family::Gaussian: {
      const double r = spec.param("r");
      out.rho = 6.0 / std::numbers::pi * std::asin(r / 2.0);
      out.xi = 3.0 / std::numbers::pi * std::asin((1.0 + r * r) / 2.0) - 0.5;
      break;
    }
    default:
      throw Error(ErrorCode::DomainError, "no closed form for " + spec.to_string());
  }
  return out;
}

Sample sample(const CopulaModel& model, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  Sample out;
  out.x.resize(n);
  out.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double w = rng.uniform();
    out.x[i] = u;
    out.y[i] = model.conditional_quantile(u, w);
  }
  return out;
}

double xi_n(const Sample& sample, std::uint64_t tie_seed) {
  const std::size_t n = sample.size();
  if (n < 2 || sample.y.size() != n) {
    throw Error(ErrorCode::TooFewPoints, "xi_n needs at least 2 paired observations");
  }
  // random secondary key breaks ties in x reproducibly
  RngStream rng(tie_seed, 0x7469'6573ULL);
  std::vector<std::uint64_t> key(n);
  for (auto& k : key) k = rng.next_u64();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (sample.x[a] != sample.x[b]) return sample.x[a] < sample.x[b];
    return key[a] < key[b];
  });

  // r_i = #{j : y_j <= y_i}, l_i = #{j : y_j >= y_i}
  std::vector<double> sorted_y(sample.y);
  std::sort(sorted_y.begin(), sorted_y.end());
  std::vector<double> r(n);
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double y = sample.y[order[i]];
    r[i] = static_cast<double>(std::upper_bound(sorted_y.begin(), sorted_y.end(), y) - sorted_y.begin());
    l[i] = static_cast<double>(sorted_y.end() - std::lower_bound(sorted_y.begin(), sorted_y.end(), y));
  }
  std::vector<double> jumps(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) jumps[i] = std::abs(r[i + 1] - r[i]);
  std::vector<double> spread(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) spread[i] = l[i] * (nd - l[i]);
  const double denom = 2.0 * pairwise_sum(spread);
  if (denom == 0.0) throw Error(ErrorCode::ZeroVariance, "xi_n: all y values are tied");
  return 1.0 - nd * pairwise_sum(jumps) / denom;
}

double rho_n(const Sample& sample) {
  const std::size_t n = sample.size();
  if (n < 2 || sample.y.size() != n) {
    throw Error(ErrorCode::TooFewPoints, "rho_n needs at least 2 paired observations");
  }
  const auto rx = ranks(sample.x);
  const auto ry = ranks(sample.y);
  const double mean = 0.5 * (static_cast<double>(n) + 1.0);
  std::vector<double> sxy(n);
  std::vector<double> sxx(n);
  std::vector<double> syy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = rx[i] - mean;
    const double dy = ry[i] - mean;
    sxy[i] = dx * dy;
    sxx[i] = dx * dx;
    syy[i] = dy * dy;
  }
  const double vx = pairwise_sum(sxx);
  const double vy = pairwise_sum(syy);
  if (vx == 0.0 || vy == 0.0) throw Error(ErrorCode::ZeroVariance, "rho_n: constant ranks");
  return std::clamp(pairwise_sum(sxy) / std::sqrt(vx * vy), -1.0, 1.0);
}

MeasureResult measures_monte_carlo(const CopulaModel& model, std::size_t n, std::uint64_t seed) {
  const Sample s = sample(model, n, seed);
  MeasureResult out;
  out.xi = std::clamp(xi_n(s, seed), 0.0, 1.0);
  out.rho = rho_n(s);
  out.method = Method::MonteCarlo;
  out.err = 1.0 / std::sqrt(static_cast<double>(n));
  return out;
}

std::vector<GapMaximum> reference_gap_maxima() {
  return {
      {Family::Cb, 1.0, 0.7, 0.3, 0.4},
      {Family::Clayton, 1.998, 0.682, 0.335, 0.347},
      {Family::Frank, 5.529, 0.682, 0.299, 0.383},
      {Family::Gaussian, 0.707, 0.690, 0.310, 0.380},
      {Family::Gumbel, 1.991, 0.681, 0.313, 0.367},
      {Family::Joe, 2.938, 0.691, 0.348, 0.343},
  };
}

ParamGrid default_gap_grid(Family family) {
  switch (family) {
    case Family::Cb: return {0.05, 20.0, 4000};
    case Family::Clayton: return {0.25, 6.0, 24};
    case Family::Frank: return {1.0, 15.0, 29};
    case Family::Gaussian: return {0.2, 0.95, 16};
    case Family::Gumbel: return {1.05, 4.0, 24};
    case Family::Joe: return {1.05, 6.0, 24};
    default:
      throw Error(ErrorCode::DomainError, "no gap search range for " + std::string(family_name(family)));
  }
}

GapMaximum table1_search(Family family, const ParamGrid& grid, int nodes, double param_tol) {
  if (grid.points < 3 || !(grid.hi > grid.lo)) throw Error(ErrorCode::DomainError, "table1_search: bad grid");
  auto spec_for = [&](double param) -> CopulaSpec {
    switch (family) {
      case Family::Cb: return CopulaSpec::cb(param);
      case Family::Clayton: return CopulaSpec::clayton(param);
      case Family::Frank: return CopulaSpec::frank(param);
      case Family::Gaussian: return CopulaSpec::gaussian(param);
      case Family::Gumbel: return CopulaSpec::gumbel(param);
      case Family::Joe: return CopulaSpec::joe(param);
      default:
        throw Error(ErrorCode::DomainError, "table1_search: unsupported family " + std::string(family_name(family)));
    }
  };
  auto evaluate = [&](double param) -> MeasureResult {
    if (family == Family::Cb) return measures_closed(spec_for(param));
    const CopulaModel model(spec_for(param));
    MeasureResult r;
    r.xi = xi_integral(model, nodes);
    r.rho = rho_integral(model, nodes);
    r.method = Method::Quadrature;
    return r;
  };
  auto gap = [&](double param) {
    const auto r = evaluate(param);
    return r.rho - r.xi;
  };

  const double step = (grid.hi - grid.lo) / (grid.points - 1);
  int best = 0;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.points; ++i) {
    const double g = gap(grid.lo + step * i);
    if (g > best_gap) {
      best_gap = g;
      best = i;
    }
  }
  const double lo = grid.lo + step * std::max(best - 1, 0);
  const double hi = grid.lo + step * std::min(best + 1, grid.points - 1);
  const auto refined = golden_section_max(gap, lo, hi, param_tol);
  const auto at = evaluate(refined.x);
  return {family, refined.x, at.rho, at.xi, at.rho - at.xi};
}

}  // namespace xirho
