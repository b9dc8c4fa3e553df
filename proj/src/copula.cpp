#include "xirho/copula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "xirho/error.hpp"
#include "xirho/numerics.hpp"

namespace xirho {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownFamily: return "UnknownFamily";
    case ErrorCode::MissingParam: return "MissingParam";
    case ErrorCode::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NumericOverflow: return "NumericOverflow";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::InversionFailed: return "InversionFailed";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::GridInconsistent: return "GridInconsistent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NotInRegion: return "NotInRegion";
    case ErrorCode::BisectionFailed: return "BisectionFailed";
    case ErrorCode::BracketFailed: return "BracketFailed";
    case ErrorCode::NoBracket: return "NoBracket";
    case ErrorCode::InfeasibleBudget: return "InfeasibleBudget";
    case ErrorCode::ProjectionNotConverged: return "ProjectionNotConverged";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

struct FamilyInfo {
  Family family;
  std::string_view name;
  std::vector<std::string> keys;
};

const std::vector<FamilyInfo>& family_table() {
  static const std::vector<FamilyInfo> table = {
      {Family::Pi, "pi", {}},
      {Family::M, "m", {}},
      {Family::W, "w", {}},
      {Family::Cb, "cb", {"b"}},
      {Family::Shuffle, "shuffle", {"b", "p"}},
      {Family::PlodExample, "plod", {}},
      {Family::Clayton, "clayton", {"theta"}},
      {Family::Frank, "frank", {"theta"}},
      {Family::Gaussian, "gauss", {"r"}},
      {Family::Gumbel, "gumbel", {"theta"}},
      {Family::Joe, "joe", {"theta"}},
      {Family::Mixture, "mixture", {}},
  };
  return table;
}

const FamilyInfo& info(Family family) {
  for (const auto& entry : family_table()) {
    if (entry.family == family) return entry;
  }
  throw Error(ErrorCode::UnknownFamily, "unregistered family");
}

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void out_of_range(const std::string& key, double value, const std::string& rule) {
  throw Error(ErrorCode::ParamOutOfRange, key + "=" + format_number(value) + " violates " + rule);
}

}  // namespace

std::string_view family_name(Family family) { return info(family).name; }

double CopulaSpec::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) {
    throw Error(ErrorCode::MissingParam, std::string(family_name(family)) + " requires '" + key + "'");
  }
  return it->second;
}

std::string CopulaSpec::to_string() const {
  std::string out(family_name(family));
  char sep = ':';
  for (const auto& key : info(family).keys) {
    auto it = params.find(key);
    if (it == params.end()) continue;
    out += sep;
    out += key + "=" + format_number(it->second);
    sep = ',';
  }
  return out;
}

void validate(const CopulaSpec& spec) {
  for (const auto& key : info(spec.family).keys) spec.param(key);
  auto get = [&](const char* key) { return spec.param(key); };
  switch (spec.family) {
    case Family::Cb: {
      const double b = get("b");
      if (!std::isfinite(b) || b == 0.0) out_of_range("b", b, "b != 0");
      break;
    }
    case Family::Shuffle: {
      const double b = get("b");
      const double p = get("p");
      if (!std::isfinite(b) || b == 0.0) out_of_range("b", b, "b != 0");
      if (!(p >= 0.0 && p <= 1.0)) out_of_range("p", p, "0 <= p <= 1");
      break;
    }
    case Family::Gaussian: {
      const double r = get("r");
      if (!(r > -1.0 && r < 1.0)) out_of_range("r", r, "-1 < r < 1");
      break;
    }
    case Family::Clayton: {
      const double t = get("theta");
      if (!(t > 0.0) || !std::isfinite(t)) out_of_range("theta", t, "theta > 0");
      break;
    }
    case Family::Frank: {
      const double t = get("theta");
      if (t == 0.0 || !std::isfinite(t)) out_of_range("theta", t, "theta != 0");
      break;
    }
    case Family::Gumbel:
    case Family::Joe: {
      const double t = get("theta");
      if (!(t >= 1.0) || !std::isfinite(t)) out_of_range("theta", t, "theta >= 1");
      break;
    }
    default:
      break;
  }
}

CopulaSpec parse_spec(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  std::string name(trim(text.substr(0, colon)));
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  if (name == "gaussian" || name == "normal") name = "gauss";
  if (name == "independence") name = "pi";

  const FamilyInfo* found = nullptr;
  for (const auto& entry : family_table()) {
    if (entry.name == name && entry.family != Family::Mixture) found = &entry;
  }
  if (found == nullptr) throw Error(ErrorCode::UnknownFamily, "unknown copula family '" + name + "'");

  CopulaSpec spec{found->family, {}};
  if (colon != std::string_view::npos) {
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view item = trim(rest.substr(0, comma));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::ParseError, "expected key=value, got '" + std::string(item) + "'");
      }
      const std::string key(trim(item.substr(0, eq)));
      const std::string_view value_text = trim(item.substr(eq + 1));
      if (std::find(found->keys.begin(), found->keys.end(), key) == found->keys.end()) {
        throw Error(ErrorCode::ParseError, "unexpected parameter '" + key + "' for family " + name);
      }
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
      if (ec != std::errc{} || ptr != value_text.data() + value_text.size()) {
        throw Error(ErrorCode::ParseError, "invalid number '" + std::string(value_text) + "' for " + key);
      }
      spec.params[key] = value;
    }
  }
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// Boundary family

double cb_s_v(double b, double v) {
  if (b >= 1.0) {
    const double knot = 1.0 / (2.0 * b);
    if (v <= knot) return std::sqrt(2.0 * v / b);
    if (v <= 1.0 - knot) return v + knot;
  } else {
    const double knot = b / 2.0;
    if (v <= knot) return std::sqrt(2.0 * v / b);
    if (v <= 1.0 - knot) return v / b + 0.5;
  }
  return 1.0 + 1.0 / b - std::sqrt(2.0 * (1.0 - v) / b);
}

double cb_a_v(double b, double v) { return cb_s_v(b, v) - 1.0 / b; }

namespace {

// Integral of clamp(b (s - t), 0, 1) over [0, u] for b > 0.
double ramp_integral(double b, double s, double u) {
  const double a = std::max(s - 1.0 / b, 0.0);
  if (u <= a) return u;
  const double x = std::min(u, s);
  return a + b * (s * (x - a) - 0.5 * (x * x - a * a));
}

double cb_cdf_positive(double b, double u, double v) {
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (v >= 1.0) return std::min(u, 1.0);
  if (u >= 1.0) return v;
  const double s = cb_s_v(b, v);
  if (u >= s) return v;
  return std::clamp(ramp_integral(b, s, u), 0.0, v);
}

double cb_d1_positive(double b, double t, double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  return std::clamp(b * (cb_s_v(b, v) - t), 0.0, 1.0);
}

}  // namespace

double cb_cdf(double b, double u, double v) {
  if (b > 0.0) return cb_cdf_positive(b, u, v);
  if (u <= 0.0 || v <= 0.0) return 0.0;
  if (u >= 1.0) return std::min(v, 1.0);
  return std::clamp(v - cb_cdf_positive(-b, 1.0 - u, v), 0.0, std::min(u, v));
}

double cb_d1(double b, double t, double v) {
  if (b > 0.0) return cb_d1_positive(b, t, v);
  return cb_d1_positive(-b, 1.0 - t, v);
}

std::vector<double> cb_branch_points(double b) {
  const double ab = std::abs(b);
  const double knot = ab >= 1.0 ? 1.0 / (2.0 * ab) : ab / 2.0;
  std::vector<double> out;
  if (knot > 0.0 && knot < 1.0) out.push_back(knot);
  if (1.0 - knot > knot && 1.0 - knot < 1.0) out.push_back(1.0 - knot);
  return out;
}

double shuffle_cdf(double b, double p, double u, double v) {
  const double base = std::abs(b);
  const double fold = 1.0 - p;
  if (u <= fold) return cb_cdf(base, u, v);
  const double value = cb_cdf(base, fold, v) + v - cb_cdf(base, 2.0 - p - std::min(u, 1.0), v);
  return std::clamp(value, 0.0, std::min(u, v));
}

double shuffle_d1(double b, double p, double t, double v) {
  const double base = std::abs(b);
  const double fold = 1.0 - p;
  if (t <= fold) return cb_d1(base, t, v);
  return cb_d1(base, 2.0 - p - t, v);
}

}  // namespace xirho
