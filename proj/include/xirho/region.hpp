#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace xirho {

enum class Classification { Interior, Boundary, Outside };

std::string_view classification_name(Classification c);

struct RegionPoint {
  double xi = 0.0;
  double rho = 0.0;
  Classification classification = Classification::Interior;
};

/// A shuffled boundary copula shuffle(b, p) whose measures hit a target pair.
struct AttainmentRecipe {
  double b = 1.0;
  double p = 0.0;
  RegionPoint achieved;
};

/// Parameter of the boundary copula with xi = x, for x in (0, 1).
double b_of_x(double x);

/// Largest attainable |rho| given xi = x, for x in [0, 1].
double M_of_x(double x);

inline constexpr double kClosedFormTol = 1e-9;
inline constexpr double kQuadratureTol = 1e-4;

RegionPoint classify(double xi, double rho, double tol = kClosedFormTol);

/// Finds p with rho(shuffle(b_of_x(xi), p)) = rho. Boundary targets return p = 0
/// or 1 exactly. Throws NotInRegion for pairs outside the region, DomainError
/// for xi outside (0, 1) and BisectionFailed if the result misses by more than tol.
AttainmentRecipe attain(double xi, double rho, double tol = kQuadratureTol);

struct BoundaryRow {
  double x = 0.0;
  double m = 0.0;
  std::optional<double> b;  // undefined at x = 0 and x = 1
};

/// k equally spaced x in [0, 1], k >= 2.
std::vector<BoundaryRow> boundary_table(int k);

}  // namespace xirho
