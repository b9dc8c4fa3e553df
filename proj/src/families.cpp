#include <algorithm>
#include <cmath>
#include <limits>

#include "xirho/copula.hpp"
#include "xirho/error.hpp"
#include "xirho/numerics.hpp"

namespace xirho {

namespace detail {

class CopulaImpl {
 public:
  explicit CopulaImpl(CopulaSpec spec) : spec_(std::move(spec)) {}
  virtual ~CopulaImpl() = default;

  const CopulaSpec& spec() const { return spec_; }

  virtual double cdf(double u, double v) const = 0;
  virtual double d1(double t, double v) const = 0;
  virtual std::optional<double> quantile(double /*t*/, double /*w*/) const { return std::nullopt; }
  virtual std::vector<double> t_breaks(double /*v*/) const { return {}; }
  virtual std::vector<double> v_breaks() const { return {}; }

 private:
  CopulaSpec spec_;
};

}  // namespace detail

namespace {

using detail::CopulaImpl;

class IndependenceCopula final : public CopulaImpl {
 public:
  using CopulaImpl::CopulaImpl;
  double cdf(double u, double v) const override { return u * v; }
  double d1(double, double v) const override { return v; }
  std::optional<double> quantile(double, double w) const override { return w; }
};

class UpperFrechet final : public CopulaImpl {
 public:
  using CopulaImpl::CopulaImpl;
  double cdf(double u, double v) const override { return std::min(u, v); }
  double d1(double t, double v) const override { return t <= v ? 1.0 : 0.0; }
  std::optional<double> quantile(double t, double) const override { return t; }
  std::vector<double> t_breaks(double v) const override { return {v}; }
};

class LowerFrechet final : public CopulaImpl {
 public:
  using CopulaImpl::CopulaImpl;
  double cdf(double u, double v) const override { return std::max(u + v - 1.0, 0.0); }
  double d1(double t, double v) const override { return t >= 1.0 - v ? 1.0 : 0.0; }
  std::optional<double> quantile(double t, double) const override { return 1.0 - t; }
  std::vector<double> t_breaks(double v) const override { return {1.0 - v}; }
};

class BoundaryCopula final : public CopulaImpl {
 public:
  explicit BoundaryCopula(CopulaSpec spec) : CopulaImpl(std::move(spec)), b_(this->spec().param("b")) {}
  double cdf(double u, double v) const override { return cb_cdf(b_, u, v); }
  double d1(double t, double v) const override { return cb_d1(b_, t, v); }
  std::vector<double> t_breaks(double v) const override {
    const double ab = std::abs(b_);
    const double s = cb_s_v(ab, v);
    const double a = s - 1.0 / ab;
    if (b_ > 0.0) return {a, s};
    return {1.0 - a, 1.0 - s};
  }
  std::vector<double> v_breaks() const override { return cb_branch_points(b_); }

 private:
  double b_;
};

class ShuffledBoundaryCopula final : public CopulaImpl {
 public:
  explicit ShuffledBoundaryCopula(CopulaSpec spec)
      : CopulaImpl(std::move(spec)), b_(std::abs(this->spec().param("b"))), p_(this->spec().param("p")) {
    v_breaks_ = cb_branch_points(b_);
    const double fold = 1.0 - p_;
    // levels v at which a_v or s_v crosses the fold point
    for (double offset : {0.0, 1.0 / b_}) {
      auto g = [&](double v) { return cb_s_v(b_, v) - offset - fold; };
      if (g(0.0) < 0.0 && g(1.0) > 0.0) v_breaks_.push_back(find_root(g, 0.0, 1.0, 1e-15));
    }
  }
  double cdf(double u, double v) const override { return shuffle_cdf(b_, p_, u, v); }
  double d1(double t, double v) const override { return shuffle_d1(b_, p_, t, v); }
  std::vector<double> t_breaks(double v) const override {
    const double s = cb_s_v(b_, v);
    const double a = s - 1.0 / b_;
    const double fold = 1.0 - p_;
    return {fold, a, s, 2.0 - p_ - a, 2.0 - p_ - s};
  }
  std::vector<double> v_breaks() const override { return v_breaks_; }

 private:
  double b_;
  double p_;
  std::vector<double> v_breaks_;
};

// Panels refined geometrically towards 0 and 1, where the conditional
// distributions of the classical families steepen, plus the diagonal.
std::vector<double> graded_breaks(double v) {
  return {1e-8, 1e-6, 1e-4, 1e-2, v, 1.0 - 1e-2, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8};
}

std::vector<double> graded_v_breaks() { return {1e-8, 1e-6, 1e-4, 1e-2, 1.0 - 1e-2, 1.0 - 1e-4, 1.0 - 1e-6, 1.0 - 1e-8}; }

// V = f(U) with f swapping (1/4, 1/2] and [1/2, 3/4].
class PlodExampleCopula final : public CopulaImpl {
 public:
  using CopulaImpl::CopulaImpl;

  static double f(double t) {
    if (t > 0.25 && t <= 0.5) return t + 0.25;
    if (t >= 0.5 && t <= 0.75) return t - 0.25;
    return t;
  }

  double cdf(double u, double v) const override {
    struct Piece {
      double lo, hi, shift;
    };
    static constexpr Piece pieces[] = {{0.0, 0.25, 0.0}, {0.25, 0.5, 0.25}, {0.5, 0.75, -0.25}, {0.75, 1.0, 0.0}};
    double total = 0.0;
    for (const auto& piece : pieces) {
      total += std::max(0.0, std::min({piece.hi, u, v - piece.shift}) - piece.lo);
    }
    return std::clamp(total, 0.0, std::min(u, v));
  }
  double d1(double t, double v) const override { return f(t) <= v ? 1.0 : 0.0; }
  std::optional<double> quantile(double t, double) const override { return f(t); }
  std::vector<double> t_breaks(double v) const override { return {0.25, 0.5, 0.75, v, v - 0.25, v + 0.25}; }
  std::vector<double> v_breaks() const override { return {0.25, 0.5, 0.75}; }
};

class ClaytonCopula final : public CopulaImpl {
 public:
  explicit ClaytonCopula(CopulaSpec spec) : CopulaImpl(std::move(spec)), theta_(this->spec().param("theta")) {
    if (theta_ > 1000.0) {
      throw Error(ErrorCode::NumericOverflow, "clayton theta beyond practical range (<= 1000)");
    }
  }
  // log(u^-theta + v^-theta - 1), evaluated without overflow
  double log_s(double u, double v) const {
    const double x = -theta_ * std::log(u);
    const double y = -theta_ * std::log(v);
    const double m = std::max(x, y);
    return m + std::log(std::exp(x - m) + std::exp(y - m) - std::exp(-m));
  }
  double cdf(double u, double v) const override {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    return std::clamp(std::exp(-log_s(u, v) / theta_), 0.0, std::min(u, v));
  }
  double d1(double t, double v) const override {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (t <= 0.0) return 1.0;
    return std::clamp(std::exp((-theta_ - 1.0) * std::log(t) - (1.0 / theta_ + 1.0) * log_s(t, v)), 0.0, 1.0);
  }
  std::optional<double> quantile(double t, double w) const override {
    // v = ((w^(-theta/(1+theta)) - 1) t^(-theta) + 1)^(-1/theta)
    const double a = std::expm1(-theta_ / (1.0 + theta_) * std::log(w));
    const double x = std::log(a) - theta_ * std::log(t);
    const double log_inner = x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
    return std::clamp(std::exp(-log_inner / theta_), 0.0, 1.0);
  }

  std::vector<double> t_breaks(double v) const override { return graded_breaks(v); }
  std::vector<double> v_breaks() const override { return graded_v_breaks(); }

 private:
  double theta_;
};

class FrankCopula final : public CopulaImpl {
 public:
  explicit FrankCopula(CopulaSpec spec) : CopulaImpl(std::move(spec)), theta_(this->spec().param("theta")) {
    if (std::abs(theta_) > 700.0) {
      throw Error(ErrorCode::NumericOverflow, "frank |theta| beyond practical range (<= 700)");
    }
  }
  double cdf(double u, double v) const override {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    const double num = std::expm1(-theta_ * u) * std::expm1(-theta_ * v);
    const double c = -std::log1p(num / std::expm1(-theta_)) / theta_;
    return std::clamp(c, std::max(u + v - 1.0, 0.0), std::min(u, v));
  }
  double d1(double t, double v) const override {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    // logistic form 1 / (1 + e^g) avoids cancellation when theta is large
    auto log_abs_expm1 = [](double x) { return x > 0.0 ? x + std::log(-std::expm1(-x)) : std::log(-std::expm1(x)); };
    const double g = theta_ * t + log_abs_expm1(-theta_ * (1.0 - v)) - log_abs_expm1(theta_ * v);
    return std::clamp(1.0 / (1.0 + std::exp(g)), 0.0, 1.0);
  }
  std::optional<double> quantile(double t, double w) const override {
    // solve w = e^{-theta t} ev / (e^{-theta} - 1 + eu ev) for ev
    const double eu = std::expm1(-theta_ * t);
    const double denom = (eu + 1.0) - w * eu;
    const double ev = w * std::expm1(-theta_) / denom;
    const double v = -std::log1p(ev) / theta_;
    return std::clamp(v, 0.0, 1.0);
  }

 private:
  double theta_;
};

class GaussianCopula final : public CopulaImpl {
 public:
  explicit GaussianCopula(CopulaSpec spec)
      : CopulaImpl(std::move(spec)), r_(this->spec().param("r")), sr_(std::sqrt(1.0 - r_ * r_)) {
    if (sr_ < 1e-8) throw Error(ErrorCode::NumericOverflow, "gaussian |r| too close to 1");
  }
  double cdf(double u, double v) const override {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    const double c = bivariate_normal_cdf(normal_quantile(u), normal_quantile(v), r_);
    return std::clamp(c, std::max(u + v - 1.0, 0.0), std::min(u, v));
  }
  double d1(double t, double v) const override {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (t <= 0.0) return r_ > 0.0 ? 1.0 : (r_ < 0.0 ? 0.0 : v);
    if (t >= 1.0) return r_ > 0.0 ? 0.0 : (r_ < 0.0 ? 1.0 : v);
    return normal_cdf((normal_quantile(v) - r_ * normal_quantile(t)) / sr_);
  }
  std::optional<double> quantile(double t, double w) const override {
    return normal_cdf(r_ * normal_quantile(t) + sr_ * normal_quantile(w));
  }

  std::vector<double> t_breaks(double v) const override { return graded_breaks(v); }
  std::vector<double> v_breaks() const override { return graded_v_breaks(); }

 private:
  double r_;
  double sr_;
};

class GumbelCopula final : public CopulaImpl {
 public:
  explicit GumbelCopula(CopulaSpec spec) : CopulaImpl(std::move(spec)), theta_(this->spec().param("theta")) {
    if (theta_ > 1000.0) throw Error(ErrorCode::NumericOverflow, "gumbel theta beyond practical range (<= 1000)");
  }
  // (lu^theta + lv^theta)^(1/theta) without overflow
  double a(double lu, double lv) const {
    const double m = std::max(lu, lv);
    if (m == 0.0) return 0.0;
    const double n = std::min(lu, lv);
    return m * std::pow(1.0 + std::pow(n / m, theta_), 1.0 / theta_);
  }
  double cdf(double u, double v) const override {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    return std::clamp(std::exp(-a(-std::log(u), -std::log(v))), 0.0, std::min(u, v));
  }
  double d1(double t, double v) const override {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (t <= 0.0) return theta_ == 1.0 ? v : 1.0;
    if (t >= 1.0) return theta_ == 1.0 ? v : 0.0;
    const double lu = -std::log(t);
    const double lv = -std::log(v);
    const double aa = a(lu, lv);
    const double h = std::exp(-aa) * std::pow(lu / aa, theta_ - 1.0) / t;
    return std::clamp(h, 0.0, 1.0);
  }

  std::vector<double> t_breaks(double v) const override { return graded_breaks(v); }
  std::vector<double> v_breaks() const override { return graded_v_breaks(); }

 private:
  double theta_;
};

class JoeCopula final : public CopulaImpl {
 public:
  explicit JoeCopula(CopulaSpec spec) : CopulaImpl(std::move(spec)), theta_(this->spec().param("theta")) {
    if (theta_ > 1000.0) throw Error(ErrorCode::NumericOverflow, "joe theta beyond practical range (<= 1000)");
  }
  double cdf(double u, double v) const override {
    if (u <= 0.0 || v <= 0.0) return 0.0;
    if (u >= 1.0) return v;
    if (v >= 1.0) return u;
    const double x = std::pow(1.0 - u, theta_);
    const double y = std::pow(1.0 - v, theta_);
    const double s = x + y - x * y;
    return std::clamp(1.0 - std::pow(s, 1.0 / theta_), 0.0, std::min(u, v));
  }
  double d1(double t, double v) const override {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return 1.0;
    if (t >= 1.0) return theta_ == 1.0 ? v : 0.0;
    const double ubar = 1.0 - t;
    const double x = std::pow(ubar, theta_);
    const double y = std::pow(1.0 - v, theta_);
    const double s = x + y - x * y;
    // ubar^(theta-1) (1 - y) s^(1/theta - 1) == (1 - y) (ubar^theta / s)^(1 - 1/theta)
    const double h = s > 0.0 ? (1.0 - y) * std::pow(x / s, 1.0 - 1.0 / theta_) : 1.0;
    return std::clamp(h, 0.0, 1.0);
  }

  std::vector<double> t_breaks(double v) const override { return graded_breaks(v); }
  std::vector<double> v_breaks() const override { return graded_v_breaks(); }

 private:
  double theta_;
};

class MixtureCopula final : public CopulaImpl {
 public:
  MixtureCopula(CopulaModel first, CopulaModel second, double weight)
      : CopulaImpl(CopulaSpec{Family::Mixture, {{"weight", weight}}}),
        first_(std::move(first)),
        second_(std::move(second)),
        weight_(weight) {}
  double cdf(double u, double v) const override {
    return weight_ * first_.cdf(u, v) + (1.0 - weight_) * second_.cdf(u, v);
  }
  double d1(double t, double v) const override {
    return weight_ * first_.d1(t, v) + (1.0 - weight_) * second_.d1(t, v);
  }
  std::vector<double> t_breaks(double v) const override {
    auto out = first_.t_breaks(v);
    auto more = second_.t_breaks(v);
    out.insert(out.end(), more.begin(), more.end());
    return out;
  }
  std::vector<double> v_breaks() const override {
    auto out = first_.v_breaks();
    auto more = second_.v_breaks();
    out.insert(out.end(), more.begin(), more.end());
    return out;
  }

 private:
  CopulaModel first_;
  CopulaModel second_;
  double weight_;
};

std::shared_ptr<const CopulaImpl> make_impl(const CopulaSpec& spec) {
  validate(spec);
  switch (spec.family) {
    case Family::Pi: return std::make_shared<IndependenceCopula>(spec);
    case Family::M: return std::make_shared<UpperFrechet>(spec);
    case Family::W: return std::make_shared<LowerFrechet>(spec);
    case Family::Cb: return std::make_shared<BoundaryCopula>(spec);
    case Family::Shuffle: return std::make_shared<ShuffledBoundaryCopula>(spec);
    case Family::PlodExample: return std::make_shared<PlodExampleCopula>(spec);
    case Family::Clayton: return std::make_shared<ClaytonCopula>(spec);
    case Family::Frank: return std::make_shared<FrankCopula>(spec);
    case Family::Gaussian: return std::make_shared<GaussianCopula>(spec);
    case Family::Gumbel: return std::make_shared<GumbelCopula>(spec);
    case Family::Joe: return std::make_shared<JoeCopula>(spec);
    case Family::Mixture: break;
  }
  throw Error(ErrorCode::UnknownFamily, "mixture copulas are built with CopulaModel::mixture");
}

}  // namespace

CopulaModel::CopulaModel(const CopulaSpec& spec) : impl_(make_impl(spec)) {}

CopulaModel::CopulaModel(std::shared_ptr<const detail::CopulaImpl> impl) : impl_(std::move(impl)) {}

CopulaModel CopulaModel::mixture(const CopulaModel& first, const CopulaModel& second, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw Error(ErrorCode::ParamOutOfRange, "mixture weight must lie in [0, 1]");
  }
  return CopulaModel(std::make_shared<MixtureCopula>(first, second, weight));
}

const CopulaSpec& CopulaModel::spec() const { return impl_->spec(); }

double CopulaModel::cdf(double u, double v) const {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  const double c = impl_->cdf(u, v);
  if (!std::isfinite(c)) {
    throw Error(ErrorCode::NumericOverflow, spec().to_string() + ": non-finite cdf");
  }
  return c;
}

double CopulaModel::d1(double t, double v) const {
  t = std::clamp(t, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  const double h = impl_->d1(t, v);
  if (!std::isfinite(h)) {
    throw Error(ErrorCode::NumericOverflow, spec().to_string() + ": non-finite derivative");
  }
  return h;
}

double CopulaModel::conditional_quantile(double t, double w) const {
  if (auto closed = impl_->quantile(t, w); closed && std::isfinite(*closed)) return *closed;
  // smallest v with h_v(t) >= w
  double lo = 0.0;
  double hi = 1.0;
  if (d1(t, lo) > w || d1(t, hi) < w) {
    throw Error(ErrorCode::InversionFailed,
                spec().to_string() + ": h_v(t) does not bracket w at t=" + std::to_string(t));
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-16; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (d1(t, mid) >= w) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::vector<double> CopulaModel::t_breaks(double v) const {
  auto raw = impl_->t_breaks(v);
  std::vector<double> out;
  for (double x : raw) {
    if (x > 0.0 && x < 1.0) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> CopulaModel::v_breaks() const {
  auto raw = impl_->v_breaks();
  std::vector<double> out;
  for (double x : raw) {
    if (x > 0.0 && x < 1.0) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

double finite_difference_d1(const CopulaModel& model, double t, double v, double h) {
  double value;
  if (t < h) {
    value = (model.cdf(t + h, v) - model.cdf(t, v)) / h;
  } else if (t > 1.0 - h) {
    value = (model.cdf(t, v) - model.cdf(t - h, v)) / h;
  } else {
    value = (model.cdf(t + h, v) - model.cdf(t - h, v)) / (2.0 * h);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace xirho
