#include "xirho/region.hpp"

#include <cmath>
#include <string>

#include "xirho/copula.hpp"
#include "xirho/error.hpp"
#include "xirho/measures.hpp"
#include "xirho/numerics.hpp"

namespace xirho {

std::string_view classification_name(Classification c) {
  switch (c) {
    case Classification::Interior: return "interior";
    case Classification::Boundary: return "boundary";
    case Classification::Outside: return "outside";
  }
  return "unknown";
}

double b_of_x(double x) {
  if (!(x > 0.0 && x < 1.0)) {
    throw Error(ErrorCode::DomainError, "b_of_x requires x in (0,1), got " + std::to_string(x));
  }
  if (x <= 0.3) {
    const double r = std::sqrt(6.0 * x);
    return r / (2.0 * std::cos(std::acos(-0.6 * r) / 3.0));
  }
  return (5.0 + std::sqrt(5.0 * (6.0 * x - 1.0))) / (10.0 * (1.0 - x));
}

double M_of_x(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw Error(ErrorCode::DomainError, "M_of_x requires x in [0,1], got " + std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double b = b_of_x(x);
  if (x <= 0.3) return b - 0.3 * b * b;
  return 1.0 - 1.0 / (2.0 * b * b) + 1.0 / (5.0 * b * b * b);
}

RegionPoint classify(double xi, double rho, double tol) {
  RegionPoint point{xi, rho, Classification::Outside};
  if (!(xi >= 0.0 && xi <= 1.0) || !std::isfinite(rho)) return point;
  const double m = M_of_x(xi);
  const double excess = std::abs(rho) - m;
  if (excess > tol) return point;
  point.classification = std::abs(excess) <= tol ? Classification::Boundary : Classification::Interior;
  return point;
}

namespace {

constexpr int kAttainNodes = 64;
constexpr int kAttainPanels = 4;

double shuffle_rho(double b, double p) {
  return rho_integral(CopulaModel(CopulaSpec::shuffle(b, p)), kAttainNodes, kAttainPanels);
}

}  // namespace

AttainmentRecipe attain(double xi, double rho, double tol) {
  const RegionPoint target = classify(xi, rho, tol);
  if (target.classification == Classification::Outside) {
    throw Error(ErrorCode::NotInRegion, "(xi=" + std::to_string(xi) + ", rho=" + std::to_string(rho) +
                                            ") lies outside the attainable region");
  }
  if (!(xi > 0.0 && xi < 1.0)) {
    throw Error(ErrorCode::DomainError, "attain requires xi in (0,1), got " + std::to_string(xi));
  }
  const double b = b_of_x(xi);
  const double m = M_of_x(xi);

  double p = 0.0;
  if (rho >= m - tol) {
    p = 0.0;
  } else if (rho <= -m + tol) {
    p = 1.0;
  } else {
    // rho(shuffle(b, p)) decreases from m at p = 0 to -m at p = 1.
    try {
      p = find_root([&](double q) { return shuffle_rho(b, q) - rho; }, 0.0, 1.0, 1e-12);
    } catch (const Error& e) {
      throw Error(ErrorCode::BisectionFailed, std::string("shuffle parameter search: ") + e.what());
    }
  }

  const MeasureResult achieved =
      measures_quadrature(CopulaModel(CopulaSpec::shuffle(b, p)), {kAttainNodes, kAttainPanels});
  if (std::abs(achieved.xi - xi) > std::max(tol, 2e-4) || std::abs(achieved.rho - rho) > std::max(tol, 1e-4)) {
    throw Error(ErrorCode::BisectionFailed,
                "recipe (b=" + std::to_string(b) + ", p=" + std::to_string(p) + ") reaches xi=" +
                    std::to_string(achieved.xi) + ", rho=" + std::to_string(achieved.rho));
  }
  return {b, p, classify(achieved.xi, achieved.rho, tol)};
}

std::vector<BoundaryRow> boundary_table(int k) {
  if (k < 2) throw Error(ErrorCode::DomainError, "boundary_table requires k >= 2");
  std::vector<BoundaryRow> rows(k);
  for (int i = 0; i < k; ++i) {
    const double x = i == k - 1 ? 1.0 : static_cast<double>(i) / (k - 1);
    rows[i].x = x;
    rows[i].m = M_of_x(x);
    if (x > 0.0 && x < 1.0) rows[i].b = b_of_x(x);
  }
  return rows;
}

}  // namespace xirho
