#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "xirho/copula.hpp"
#include "xirho/error.hpp"
#include "xirho/oracle.hpp"
#include "xirho/region.hpp"

using namespace xirho;

namespace {

double row_mean(const std::vector<double>& row) {
  double s = 0.0;
  for (double x : row) s += x;
  return s / static_cast<double>(row.size());
}

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

TEST_CASE("row subproblem") {
  const auto h = solve_row(1.0, 1.0, 4);
  const std::vector<double> expected{0.375, 0.125, 0.0, 0.0};
  for (int i = 0; i < 4; ++i) CHECK(std::abs(h[i] - expected[i]) <= 1e-15);

  // Brute force over the slice of the box with the same mean on a 0.01 grid.
  const double target = row_mean(h);
  auto value = [](const std::vector<double>& x) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += 2.0 * (1.0 - (i + 0.5) / 4.0) * x[i] - x[i] * x[i];
    return s;
  };
  double best = -1e300;
  for (int a = 0; a <= 100; ++a) {
    for (int b = 0; b <= 100; ++b) {
      for (int c = 0; c <= 100; ++c) {
        const double d = 4.0 * target - (a + b + c) / 100.0;
        if (d < 0.0 || d > 1.0) continue;
        best = std::max(best, value({a / 100.0, b / 100.0, c / 100.0, d}));
      }
    }
  }
  CHECK(value(h) >= best - 1e-12);

  for (double x : solve_row(0.7, 5.0, 50)) CHECK(x == 0.0);
  const double t0 = 0.5 / 50;
  CHECK(solve_row(0.7, 2.0 * (1.0 - t0) - 2.0 * 0.7, 50).front() == 1.0);
}

TEST_CASE("row calibration") {
  for (double mu : {0.05, 0.5, 1.0, 3.0}) {
    for (double v : {0.01, 0.2, 0.5, 0.77, 0.99}) {
      const double gamma = calibrate_gamma(mu, v, 400);
      CHECK(std::abs(row_mean(solve_row(mu, gamma, 400)) - v) <= 1e-12);
    }
  }
  const double g0 = calibrate_gamma(1.0, 0.0, 100);
  for (double x : solve_row(1.0, g0, 100)) CHECK(x == 0.0);
  CHECK(row_mean(solve_row(1.0, g0 - 1e-3, 100)) > 0.0);
  for (double x : solve_row(1.0, calibrate_gamma(1.0, 1.0, 100), 100)) CHECK(x == 1.0);

  // mu = 1, v = 1/2 is the middle branch of the boundary copula with b = 1.
  const auto row = solve_row(1.0, calibrate_gamma(1.0, 0.5, 400), 400);
  int ramp = 0;
  double s = 0.0;
  for (int i = 0; i < 400; ++i) {
    if (row[i] > 0.0 && row[i] < 1.0) {
      s += row[i] + (i + 0.5) / 400.0;
      ++ramp;
    }
  }
  REQUIRE(ramp > 0);
  CHECK(std::abs(s / ramp - cb_s_v(1.0, 0.5)) <= 1e-3);
}

TEST_CASE("budget range") {
  const auto r = achievable_budget(200, 200);
  CHECK(r.lo <= 1e-4);
  CHECK(r.hi < 1.0);
  CHECK(r.hi > 0.99);
  CHECK(code_of([] { solve({200, 200, 0.9999}); }) == ErrorCode::InfeasibleBudget);
  CHECK(code_of([] { solve({200, 200, -0.1}); }) == ErrorCode::InfeasibleBudget);
}

TEST_CASE("discrete optimum matches the boundary") {
  for (double c : {0.1, 0.3, 0.575, 0.9}) {
    CAPTURE(c);
    const OracleSolution sol = solve({200, 200, c});
    CHECK(std::abs(sol.objective - M_of_x(c)) <= 5e-3);
    CHECK(std::abs(sol.xi - c) <= 1e-9);
    CHECK(sol.max_row_mean_residual <= 1e-10);
    CHECK(sol.monotone_in_v);
    CHECK(std::abs(sol.common_slope + b_of_x(c)) <= 0.01 * b_of_x(c));
    CHECK(std::abs(sol.mu - 1.0 / b_of_x(c)) <= 0.01 / b_of_x(c));
  }
  const OracleSolution half = solve({200, 200, 0.575});
  CHECK(std::abs(half.mu - 0.5) <= 1e-2);
  const OracleSolution near_one = solve({200, 200, 0.99});
  CHECK(std::abs(near_one.objective - M_of_x(0.99)) <= 5e-3);
  const OracleSolution near_zero = solve({200, 200, 1e-3});
  CHECK(std::abs(near_zero.objective) <= 0.06);
}

TEST_CASE("optimal rows are clamped ramps with a common slope") {
  const OracleSolution sol = solve({400, 400, 0.3});
  const GridH& h = sol.h;
  for (int j = 0; j < h.n_v; ++j) {
    const auto row = h.row(j);
    for (int i = 1; i < h.n_t; ++i) CHECK(row[i] <= row[i - 1]);
    // 1-plateau, ramp, 0-tail: at most one run of fractional cells
    int runs = 0;
    bool in_ramp = false;
    for (int i = 0; i < h.n_t; ++i) {
      const bool frac = row[i] > 0.0 && row[i] < 1.0;
      if (frac && !in_ramp) ++runs;
      in_ramp = frac;
    }
    CHECK(runs <= 1);
  }
  for (const auto& r : sol.rows) {
    if (r.ramp_cells >= 2) CHECK(std::abs(r.slope + 1.0 / sol.mu) <= 1e-3 / sol.mu);
  }
  CHECK(sol.slope_spread <= 1e-3);
  CHECK(std::abs(sol.common_slope + b_of_x(0.3)) <= 0.01 * b_of_x(0.3));
}

TEST_CASE("objective converges under refinement") {
  const double target = M_of_x(0.3);
  double previous = 1.0;
  std::vector<double> err;
  for (int n : {50, 100, 200, 400}) {
    const double e = std::abs(solve({n, n, 0.3}).objective - target);
    CHECK(e < previous);
    previous = e;
    err.push_back(e);
  }
  // error shrinks at close to first order
  CHECK(err[3] <= 0.7 * err[2]);
  // Richardson extrapolation with the O(1/n) model.
  const double o200 = solve({200, 200, 0.3}).objective;
  const double o400 = solve({400, 400, 0.3}).objective;
  CHECK(std::abs(2.0 * o400 - o200 - target) <= 1e-4);
}

TEST_CASE("optimal family assembles into a copula") {
  const OracleSolution sol = solve({100, 100, 0.575});
  const GridH& h = sol.h;
  const auto c = h.cdf_values();
  const int w = h.n_t + 1;
  for (int j = 0; j < h.n_v; ++j) {
    CHECK(c[j * w] == 0.0);
    CHECK(std::abs(c[j * w + h.n_t] - h.v_levels[j]) <= 1e-10);
    for (int k = 1; k <= h.n_t; ++k) {
      CHECK(c[j * w + k] >= c[j * w + k - 1] - 1e-12);
      if (j > 0) {
        CHECK(c[j * w + k] - c[(j - 1) * w + k] - c[j * w + k - 1] + c[(j - 1) * w + k - 1] >= -1e-12);
      }
    }
  }
}

TEST_CASE("projected gradient agrees with the multiplier solver") {
  for (double c : {0.3, 0.9}) {
    CAPTURE(c);
    const DiscreteProblem problem{50, 50, c};
    const auto sol = solve(problem);
    const auto pg = cross_check_projected_gradient(problem);
    CHECK(pg.objective <= sol.objective + 1e-6);
    CHECK(pg.objective >= sol.objective - 1e-3);
    CHECK_FALSE(pg.monotone_constraint_active);
    CHECK(std::abs(pg.h.xi() - c) <= 1e-6);
  }
  const DiscreteProblem tiny{50, 50, 1e-3};
  CHECK(std::abs(cross_check_projected_gradient(tiny).objective) <= 0.06);
}
