#include <doctest.h>

#include <cmath>
#include <vector>

#include "xirho/copula.hpp"
#include "xirho/error.hpp"
#include "xirho/measures.hpp"
#include "xirho/numerics.hpp"
#include "xirho/region.hpp"

using namespace xirho;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("boundary parameter") {
  CHECK(std::abs(b_of_x(0.3) - 1.0) <= 1e-12);
  CHECK(std::abs(b_of_x(0.3 - 1e-13) - 1.0) <= 1e-9);
  CHECK(std::abs(b_of_x(0.3 + 1e-13) - 1.0) <= 1e-9);
  CHECK(std::abs(b_of_x(0.575) - 2.0) <= 1e-12);
  for (int k = 1; k <= 99; ++k) {
    const double x = k / 100.0;
    CAPTURE(x);
    CHECK(std::abs(xi_closed_cb(b_of_x(x)) - x) <= 1e-10);
  }
  CHECK(code_of([] { b_of_x(0.0); }) == ErrorCode::DomainError);
  CHECK(code_of([] { b_of_x(1.0); }) == ErrorCode::DomainError);
}

TEST_CASE("boundary height") {
  CHECK(std::abs(M_of_x(0.3) - 0.7) <= 1e-12);
  CHECK(M_of_x(0.0) == 0.0);
  CHECK(M_of_x(1.0) == 1.0);
  CHECK(std::abs(M_of_x(0.575) - 0.9) <= 1e-12);
  CHECK(std::abs(M_of_x(0.3 - 1e-12) - M_of_x(0.3 + 1e-12)) <= 1e-10);
  for (double x : {0.05, 0.2, 0.45, 0.8, 0.97}) CHECK(std::abs(M_of_x(x) - rho_closed_cb(b_of_x(x))) <= 1e-12);
  CHECK(code_of([] { M_of_x(-0.1); }) == ErrorCode::DomainError);
}

TEST_CASE("boundary table") {
  const auto three = boundary_table(3);
  REQUIRE(three.size() == 3);
  CHECK(three[0].x == 0.0);
  CHECK(three[0].m == 0.0);
  CHECK_FALSE(three[0].b.has_value());
  CHECK(three[1].x == 0.5);
  CHECK(three[1].m == M_of_x(0.5));
  REQUIRE(three[1].b.has_value());
  CHECK(*three[1].b == b_of_x(0.5));
  CHECK(three[2].m == 1.0);
  CHECK_FALSE(three[2].b.has_value());

  const auto rows = boundary_table(1001);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].m >= rows[k - 1].m);
  for (std::size_t k = 1; k + 1 < rows.size(); ++k) {
    CHECK(rows[k + 1].m - 2.0 * rows[k].m + rows[k - 1].m <= 1e-9);
  }
  CHECK(code_of([] { boundary_table(1); }) == ErrorCode::DomainError);
}

TEST_CASE("the gap M_x - x peaks at 0.4 at x = 0.3") {
  double best_x = 0.0;
  double best = -1.0;
  for (int k = 0; k <= 10000; ++k) {
    const double x = k * 1e-4;
    if (M_of_x(x) - x > best) {
      best = M_of_x(x) - x;
      best_x = x;
    }
  }
  const auto r = golden_section_max([](double x) { return M_of_x(x) - x; }, best_x - 1e-4, best_x + 1e-4, 1e-12);
  CHECK(std::abs(r.x - 0.3) <= 1e-6);
  CHECK(std::abs(r.value - 0.4) <= 1e-10);
  CHECK(M_of_x(0.0) - 0.0 == 0.0);
  CHECK(M_of_x(1.0) - 1.0 == 0.0);
}

TEST_CASE("classification") {
  CHECK(classify(0.3, 0.7).classification == Classification::Boundary);
  CHECK(classify(0.3, -0.7).classification == Classification::Boundary);
  CHECK(classify(0.0, 0.1).classification == Classification::Outside);
  CHECK(classify(0.0, 0.0).classification == Classification::Boundary);
  CHECK(classify(1.0, -0.5).classification == Classification::Interior);
  CHECK(classify(0.3, 0.2).classification == Classification::Interior);
  CHECK(classify(0.3, 0.701).classification == Classification::Outside);
  CHECK(classify(-0.1, 0.0).classification == Classification::Outside);
  CHECK(classify(1.1, 0.0).classification == Classification::Outside);
  for (double x : {0.1, 0.3, 0.575, 0.9}) {
    CHECK(classify(x, M_of_x(x)).classification == Classification::Boundary);
    CHECK(classify(x, M_of_x(x) + 1e-3).classification == Classification::Outside);
  }
  CHECK(classification_name(Classification::Interior) == "interior");
}

TEST_CASE("rho of the shuffled boundary copula is monotone in p") {
  for (double b : {0.5, 1.0, 2.0, 5.0}) {
    CAPTURE(b);
    double previous = rho_integral(CopulaModel(CopulaSpec::shuffle(b, 0.0)), 64, 4);
    CHECK(std::abs(previous - rho_closed_cb(b)) <= 1e-6);
    for (int k = 1; k <= 10; ++k) {
      const double rho = rho_integral(CopulaModel(CopulaSpec::shuffle(b, k / 10.0)), 64, 4);
      CHECK(rho <= previous + 1e-9);
      previous = rho;
    }
    CHECK(std::abs(previous + rho_closed_cb(b)) <= 1e-6);
  }
}

TEST_CASE("attainment") {
  const auto top = attain(0.3, 0.7);
  CHECK(top.b == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(top.p == 0.0);
  const auto bottom = attain(0.3, -0.7);
  CHECK(bottom.p == 1.0);

  const auto middle = attain(0.3, 0.0);
  CHECK(middle.p > 0.0);
  CHECK(middle.p < 1.0);
  const auto check = measures_quadrature(CopulaModel(CopulaSpec::shuffle(middle.b, middle.p)));
  CHECK(std::abs(check.rho) <= 1e-4);
  CHECK(std::abs(check.xi - 0.3) <= 2e-4);

  RngStream rng(77);
  for (int k = 0; k < 5; ++k) {
    const double xi = 0.05 + 0.9 * rng.uniform();
    const double rho = (2.0 * rng.uniform() - 1.0) * M_of_x(xi) * 0.98;
    CAPTURE(xi);
    CAPTURE(rho);
    const auto r = attain(xi, rho);
    CHECK(std::abs(r.achieved.xi - xi) <= 2e-4);
    CHECK(std::abs(r.achieved.rho - rho) <= 1e-4);
  }

  CHECK(code_of([] { attain(0.3, 0.71); }) == ErrorCode::NotInRegion);
  CHECK(code_of([] { attain(1.0, 0.5); }) == ErrorCode::DomainError);
  CHECK(code_of([] { attain(0.0, 0.0); }) == ErrorCode::DomainError);
}
