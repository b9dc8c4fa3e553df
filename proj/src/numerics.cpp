#include "xirho/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <numeric>

#include "xirho/error.hpp"

namespace xirho {

QuadRule gauss_legendre(int n) {
  if (n < 2 || n > 512) {
    throw Error(ErrorCode::DomainError, "gauss_legendre: n must lie in [2, 512], got " + std::to_string(n));
  }
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const QuadRule& cached_gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, gauss_legendre(n)).first;
  return it->second;
}

double integrate(const std::function<double(double)>& f, double a, double b, const QuadRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

std::vector<double> panel_edges(double lo, double hi, int panels, std::span<const double> breaks) {
  std::vector<double> edges;
  edges.reserve(panels + 1 + breaks.size());
  for (int k = 0; k <= panels; ++k) edges.push_back(lo + (hi - lo) * k / panels);
  edges.back() = hi;
  const double eps = 1e-14 * (hi - lo);
  for (double b : breaks) {
    if (b > lo + eps && b < hi - eps) edges.push_back(b);
  }
  std::sort(edges.begin(), edges.end());
  std::vector<double> out;
  out.reserve(edges.size());
  for (double e : edges) {
    if (out.empty() || e - out.back() > eps) out.push_back(e);
  }
  out.back() = hi;
  return out;
}

double pairwise_sum(std::span<const double> values) {
  if (values.size() <= 8) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw Error(ErrorCode::NoBracket, "find_root: f(lo) and f(hi) have the same sign on [" +
                                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  // Illinois-modified regula falsi, falling back to bisection when the
  // secant step stalls; keeps the bracket at every step.
  int side = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (std::abs(hi - lo) <= tol) break;
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > std::min(lo, hi) && x < std::max(lo, hi)) || iter % 4 == 3) x = 0.5 * (lo + hi);
    const double fx = f(x);
    if (std::abs(fx) <= tol || fx == 0.0) return x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
      if (side == -1) flo *= 0.5;
      side = -1;
    } else {
      lo = x;
      flo = fx;
      if (side == 1) fhi *= 0.5;
      side = 1;
    }
  }
  return 0.5 * (lo + hi);
}

GoldenResult golden_section_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? GoldenResult{c, fc} : GoldenResult{d, fd};
}

std::vector<double> ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) out[order[k]] = avg;
    i = j;
  }
  return out;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -std::numeric_limits<double>::infinity();
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::DomainError, "normal_quantile: p outside [0, 1]");
  }
  // Acklam's rational approximation, polished by Halley steps.
  static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                              -2.759285104469687e+02, 1.383577518672690e+02,
                                              -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                              -1.556989798598866e+02, 6.680131188771972e+01,
                                              -1.328068155288572e+01};
  static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                              -2.400758277161838e+00, -2.549732539343734e+00,
                                              4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int step = 0; step < 2; ++step) {
    // work on the smaller tail for relative accuracy
    const double e = x < 0.0 ? normal_cdf(x) - p : (1.0 - p) - normal_cdf(-x);
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
  }
  return x;
}

namespace {

// Upper orthant probability P(X > h, Y > k); Genz (2004), BVNU.
double bvn_upper(double h, double k, double r) {
  const QuadRule* rule;
  if (std::abs(r) < 0.3) {
    rule = &cached_gauss_legendre(6);
  } else if (std::abs(r) < 0.75) {
    rule = &cached_gauss_legendre(12);
  } else {
    rule = &cached_gauss_legendre(20);
  }
  const std::size_t lg = rule->nodes.size() / 2;
  // negative half of the symmetric rule
  auto node = [&](std::size_t i) { return rule->nodes[i]; };
  auto weight = [&](std::size_t i) { return rule->weights[i]; };
  const double two_pi = 2.0 * std::numbers::pi;

  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = 0.5 * (h * h + k * k);
    const double asr = std::asin(r);
    for (std::size_t i = 0; i < lg; ++i) {
      double sn = std::sin(asr * (1.0 + node(i)) / 2.0);
      bvn += weight(i) * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      sn = std::sin(asr * (1.0 - node(i)) / 2.0);
      bvn += weight(i) * std::exp((sn * hk - hs) / (1.0 - sn * sn));
    }
    return bvn * asr / (2.0 * two_pi) + normal_cdf(-h) * normal_cdf(-k);
  }
  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double bb = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(two_pi) * normal_cdf(-bb / a) * bb *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < lg; ++i) {
      for (double sgn : {-1.0, 1.0}) {
        double xs = a * (sgn * -node(i) + 1.0);
        xs *= xs;
        const double rs = std::sqrt(1.0 - xs);
        bvn += a * weight(i) *
               (std::exp(-bs / (2.0 * xs) - hk / (1.0 + rs)) / rs -
                std::exp(-(bs / xs + hk) / 2.0) * (1.0 + c * xs * (1.0 + d * xs)));
      }
    }
    bvn = -bvn / two_pi;
  }
  if (r > 0.0) {
    bvn += normal_cdf(-std::max(h, k));
  } else {
    bvn = -bvn;
    if (k > h) {
      bvn += h < 0.0 ? normal_cdf(k) - normal_cdf(h) : normal_cdf(-h) - normal_cdf(-k);
    }
  }
  return bvn;
}

}  // namespace

double bivariate_normal_cdf(double x, double y, double r) {
  if (std::isinf(x) || std::isinf(y)) {
    if (x == -std::numeric_limits<double>::infinity() || y == -std::numeric_limits<double>::infinity()) return 0.0;
    if (std::isinf(x) && std::isinf(y)) return 1.0;
    return std::isinf(x) ? normal_cdf(y) : normal_cdf(x);
  }
  return std::clamp(bvn_upper(-x, -y, r), 0.0, 1.0);
}

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), state_(mix64(seed ^ mix64(stream_id + kGolden))) {}

std::uint64_t RngStream::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double RngStream::uniform() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

RngStream RngStream::split(std::uint64_t stream_id) const {
  return RngStream(mix64(seed_ + kGolden * (stream_id_ + 1)), stream_id);
}

}  // namespace xirho
