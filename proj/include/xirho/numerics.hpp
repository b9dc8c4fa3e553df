#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace xirho {

/// Gauss-Legendre rule on [-1, 1].
struct QuadRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Newton iteration on the Legendre recurrence. Valid for 2 <= n <= 512.
QuadRule gauss_legendre(int n);

/// Cached rule; the returned reference stays valid for the program lifetime.
const QuadRule& cached_gauss_legendre(int n);

/// Integrates f over [a, b] with the rule mapped onto the interval.
double integrate(const std::function<double(double)>& f, double a, double b, const QuadRule& rule);

/// Sorted, deduplicated panel edges: `panels` uniform panels on [lo, hi] plus
/// every break strictly inside (lo, hi).
std::vector<double> panel_edges(double lo, double hi, int panels, std::span<const double> breaks);

/// Pairwise (cascade) summation; deterministic for a fixed input order.
double pairwise_sum(std::span<const double> values);

/// Bracketed root of a continuous function. Returns x with |f(x)| <= tol or a
/// bracket narrower than tol. Throws NoBracket when f(lo) and f(hi) share a sign.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol,
                 int max_iter = 200);

struct GoldenResult {
  double x;
  double value;
};

/// Golden-section search for the maximum of a unimodal function on [lo, hi].
GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                                double tol);

/// 1-based ranks; tied values share the average of their positions.
std::vector<double> ranks(std::span<const double> values);

double normal_cdf(double x);
double normal_quantile(double p);

/// P(X <= x, Y <= y) for standard bivariate normal with correlation r
/// (Drezner-Wesolowsky with Genz's Gauss-Legendre refinement, ~1e-15 abs).
double bivariate_normal_cdf(double x, double y, double r);

/// SplitMix64-based stream. The sequence depends only on (seed, stream_id),
/// so parallel consumers that each own a stream are schedule independent.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1).
  double uniform();
  RngStream split(std::uint64_t stream_id) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_;
};

}  // namespace xirho
