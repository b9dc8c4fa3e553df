#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xirho {

enum class Family {
  Pi,
  M,
  W,
  Cb,
  Shuffle,
  PlodExample,
  Clayton,
  Frank,
  Gaussian,
  Gumbel,
  Joe,
  Mixture,  // convex combination; built programmatically, not parseable
};

std::string_view family_name(Family family);

/// Validated description of a copula model: family tag plus named parameters.
struct CopulaSpec {
  Family family = Family::Pi;
  std::map<std::string, double> params;

  double param(const std::string& key) const;
  /// Canonical text in the `family[:key=value{,key=value}]` grammar.
  std::string to_string() const;

  static CopulaSpec pi() { return {Family::Pi, {}}; }
  static CopulaSpec upper() { return {Family::M, {}}; }
  static CopulaSpec lower() { return {Family::W, {}}; }
  static CopulaSpec cb(double b) { return {Family::Cb, {{"b", b}}}; }
  static CopulaSpec shuffle(double b, double p) { return {Family::Shuffle, {{"b", b}, {"p", p}}}; }
  static CopulaSpec plod_example() { return {Family::PlodExample, {}}; }
  static CopulaSpec clayton(double theta) { return {Family::Clayton, {{"theta", theta}}}; }
  static CopulaSpec frank(double theta) { return {Family::Frank, {{"theta", theta}}}; }
  static CopulaSpec gaussian(double r) { return {Family::Gaussian, {{"r", r}}}; }
  static CopulaSpec gumbel(double theta) { return {Family::Gumbel, {{"theta", theta}}}; }
  static CopulaSpec joe(double theta) { return {Family::Joe, {{"theta", theta}}}; }
};

/// Parses `family[:key=value{,key=value}]`, e.g. `cb:b=1`, `gauss:r=0.707`,
/// `shuffle:b=1,p=0.5`, `pi`. Throws UnknownFamily, MissingParam, ParamOutOfRange
/// or ParseError naming the offending token.
CopulaSpec parse_spec(std::string_view text);

/// Checks the parameter invariants of a spec; throws like parse_spec.
void validate(const CopulaSpec& spec);

namespace detail {
class CopulaImpl;
}

/// Immutable, cheaply copyable copula. All member functions are const and
/// thread-safe.
class CopulaModel {
 public:
  explicit CopulaModel(const CopulaSpec& spec);

  static CopulaModel mixture(const CopulaModel& first, const CopulaModel& second, double weight);

  const CopulaSpec& spec() const;

  double cdf(double u, double v) const;
  /// h_v(t) = d/dt C(t, v), the conditional distribution P(V <= v | U = t).
  double d1(double t, double v) const;
  /// v with h_v(t) = w; closed form where available, bisection in v otherwise.
  double conditional_quantile(double t, double w) const;

  /// Points in (0,1) where t -> d1(t, v) or t -> cdf(t, v) is not smooth.
  std::vector<double> t_breaks(double v) const;
  /// Points in (0,1) where v -> integral of the above over t is not smooth.
  std::vector<double> v_breaks() const;

 private:
  explicit CopulaModel(std::shared_ptr<const detail::CopulaImpl> impl);
  std::shared_ptr<const detail::CopulaImpl> impl_;
};

// Boundary family C_b. For b > 0 the conditional distributions are clamped
// ramps h_v(t) = clamp(b (s_v - t), 0, 1); b < 0 is the decreasing
// rearrangement of C_{-b}, C_b(u, v) = v - C_{-b}(1 - u, v).

/// Horizontal band-maximum s_v (root of the ramp) for b > 0.
double cb_s_v(double b, double v);
/// Horizontal band-minimum a_v = s_v - 1/b for b > 0.
double cb_a_v(double b, double v);
double cb_cdf(double b, double u, double v);
double cb_d1(double b, double t, double v);
/// Values of v in (0,1) where the branch of s_v changes (b > 0 or b < 0).
std::vector<double> cb_branch_points(double b);

// T_p-shuffle of C_{|b|}: the law of (T_p(U), V) where T_p reflects
// (1 - p, 1] onto itself.
double shuffle_cdf(double b, double p, double u, double v);
double shuffle_d1(double b, double p, double t, double v);

/// Central difference of the cdf in its first argument with step h, one-sided
/// within h of the boundary.
double finite_difference_d1(const CopulaModel& model, double t, double v, double h = 1e-5);

}  // namespace xirho
