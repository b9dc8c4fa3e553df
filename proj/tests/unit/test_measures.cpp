#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "xirho/copula.hpp"
#include "xirho/error.hpp"
#include "xirho/measures.hpp"
#include "xirho/numerics.hpp"

using namespace xirho;

TEST_CASE("closed forms of the boundary family") {
  CHECK(std::abs(rho_closed_cb(1.0) - 0.7) < 1e-15);
  CHECK(std::abs(rho_closed_cb(-1.0) + 0.7) < 1e-15);
  CHECK(std::abs(rho_closed_cb(2.0) - 0.9) < 1e-15);
  CHECK(std::abs(xi_closed_cb(1.0) - 0.3) < 1e-15);
  CHECK(std::abs(xi_closed_cb(0.5) - 0.1) < 1e-15);
  CHECK(std::abs(xi_closed_cb(2.0) - 0.575) < 1e-15);
  for (double b : {0.01, 0.3, 0.99, 1.0, 1.7, 25.0}) {
    CHECK(xi_closed_cb(-b) == xi_closed_cb(b));
    CHECK(rho_closed_cb(-b) == -rho_closed_cb(b));
  }
  // both branches meet at |b| = 1
  CHECK(std::abs(xi_closed_cb(1.0 - 1e-12) - xi_closed_cb(1.0 + 1e-12)) < 1e-11);
  CHECK(std::abs(rho_closed_cb(1.0 - 1e-12) - rho_closed_cb(1.0 + 1e-12)) < 1e-11);
  CHECK_THROWS_AS(xi_closed_cb(0.0), Error);
}

TEST_CASE("quadrature of reference copulas") {
  const auto pi = measures_quadrature(CopulaModel(CopulaSpec::pi()));
  CHECK(std::abs(pi.rho) <= 1e-12);
  CHECK(std::abs(pi.xi) <= 1e-10);
  CHECK(pi.method == Method::Quadrature);
  const auto m = measures_quadrature(CopulaModel(CopulaSpec::upper()));
  CHECK(std::abs(m.rho - 1.0) <= 1e-3);
  CHECK(std::abs(m.xi - 1.0) <= 1e-10);
  const auto w = measures_quadrature(CopulaModel(CopulaSpec::lower()));
  CHECK(std::abs(w.rho + 1.0) <= 1e-10);
  CHECK(std::abs(w.xi - 1.0) <= 1e-10);
  const auto cb1 = xi_quadrature(CopulaModel(CopulaSpec::cb(1.0)));
  CHECK(std::abs(cb1.value - 0.3) <= 1e-6);
  const auto plod = measures_quadrature(CopulaModel(CopulaSpec::plod_example()));
  CHECK(std::abs(plod.xi - 1.0) <= 1e-8);
  CHECK(std::abs(plod.rho - 13.0 / 16.0) <= 1e-8);
  const auto g = rho_quadrature(CopulaModel(CopulaSpec::gaussian(0.707)));
  CHECK(std::abs(g.value - 0.690) <= 1e-3);
}

TEST_CASE("quadrature agrees with the boundary family closed forms") {
  for (double b : {0.1, 0.25, 0.5, 0.75, 1.0, 2.0, 5.0, 20.0}) {
    for (double sign : {1.0, -1.0}) {
      const double bb = sign * b;
      CAPTURE(bb);
      const auto q = measures_quadrature(CopulaModel(CopulaSpec::cb(bb)));
      CHECK(std::abs(q.xi - xi_closed_cb(bb)) <= 1e-6);
      CHECK(std::abs(q.rho - rho_closed_cb(bb)) <= 1e-6);
    }
  }
}

TEST_CASE("gaussian quadrature agrees with the arcsine formulas") {
  for (double r : {-0.9, -0.3, 0.2, 0.707, 0.95}) {
    CAPTURE(r);
    const auto q = measures_quadrature(CopulaModel(CopulaSpec::gaussian(r)));
    const auto c = measures_closed(CopulaSpec::gaussian(r));
    CHECK(std::abs(q.xi - c.xi) <= 1e-8);
    CHECK(std::abs(q.rho - c.rho) <= 1e-8);
  }
}

TEST_CASE("closed-form availability") {
  CHECK(has_closed_form(CopulaSpec::cb(2.0)));
  CHECK(has_closed_form(CopulaSpec::gaussian(0.1)));
  CHECK(has_closed_form(CopulaSpec::plod_example()));
  CHECK_FALSE(has_closed_form(CopulaSpec::clayton(2.0)));
  CHECK_THROWS_AS(measures_closed(CopulaSpec::frank(3.0)), Error);
  const auto plod = measures_closed(CopulaSpec::plod_example());
  CHECK(plod.xi == 1.0);
  CHECK(plod.rho == 13.0 / 16.0);
  CHECK(plod.err == 0.0);
}

TEST_CASE("quadrature settings are validated") {
  const CopulaModel c(CopulaSpec::cb(1.0));
  CHECK_THROWS_AS(xi_quadrature(c, {8, 4}), Error);
  CHECK_THROWS_AS(xi_quadrature(c, {512, 4}), Error);
  // A steep smooth integrand on a single coarse panel cannot meet 1e-15.
  try {
    QuadratureOptions opts;
    opts.nodes = 16;
    opts.panels = 1;
    opts.tolerance = 1e-15;
    xi_quadrature(CopulaModel(CopulaSpec::frank(60.0)), opts);
    FAIL("expected QuadratureNotConverged");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureNotConverged);
  }
}

TEST_CASE("mixtures: xi is convex and rho is linear") {
  const std::vector<CopulaSpec> specs = {CopulaSpec::cb(2.0), CopulaSpec::gaussian(-0.6), CopulaSpec::clayton(3.0),
                                         CopulaSpec::cb(-0.5), CopulaSpec::frank(8.0)};
  for (std::size_t a = 0; a < specs.size(); ++a) {
    const std::size_t b = (a + 2) % specs.size();
    const CopulaModel first(specs[a]);
    const CopulaModel second(specs[b]);
    const double xi1 = xi_integral(first, 32);
    const double xi2 = xi_integral(second, 32);
    const double rho1 = rho_integral(first, 32);
    const double rho2 = rho_integral(second, 32);
    for (double lambda : {0.25, 0.5, 0.75}) {
      const CopulaModel mix = CopulaModel::mixture(first, second, lambda);
      CHECK(xi_integral(mix, 32) <= lambda * xi1 + (1 - lambda) * xi2 + 1e-6);
      CHECK(std::abs(rho_integral(mix, 32) - (lambda * rho1 + (1 - lambda) * rho2)) <= 1e-8);
    }
  }
}

TEST_CASE("rank estimator of xi") {
  Sample inc{{1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}};
  CHECK(std::abs(xi_n(inc) - 0.5) < 1e-15);
  Sample dec{{1, 2, 3, 4, 5}, {5, 4, 3, 2, 1}};
  CHECK(std::abs(xi_n(dec) - 0.5) < 1e-15);
  try {
    xi_n(Sample{{1.0}, {2.0}});
    FAIL("expected TooFewPoints");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewPoints);
  }
  try {
    xi_n(Sample{{1, 2, 3}, {4, 4, 4}});
    FAIL("expected ZeroVariance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroVariance);
  }
  // Ties in x are broken by the seed; results are reproducible per seed.
  Sample ties{{1, 1, 2, 2, 3, 3}, {1, 2, 3, 4, 5, 6}};
  CHECK(xi_n(ties, 3) == xi_n(ties, 3));
  // Ties in y use the general formula; a constant-free tie still gives a finite value.
  Sample yties{{1, 2, 3, 4}, {1, 1, 2, 2}};
  const double x = xi_n(yties);
  CHECK(std::isfinite(x));
}

TEST_CASE("rank estimator of rho") {
  Sample inc{{1, 2, 3, 4}, {10, 20, 30, 40}};
  CHECK(std::abs(rho_n(inc) - 1.0) < 1e-15);
  Sample dec{{1, 2, 3, 4}, {4, 3, 2, 1}};
  CHECK(std::abs(rho_n(dec) + 1.0) < 1e-15);
  CHECK_THROWS_AS(rho_n(Sample{{1, 2}, {3, 3}}), Error);
  CHECK_THROWS_AS(rho_n(Sample{{1}, {3}}), Error);
}

TEST_CASE("sampling") {
  const Sample pi = sample(CopulaModel(CopulaSpec::pi()), 10000, 1);
  CHECK(std::abs(rho_n(pi)) <= 0.03);
  const Sample m = sample(CopulaModel(CopulaSpec::upper()), 1000, 2);
  for (std::size_t k = 0; k < m.size(); ++k) CHECK(std::abs(m.x[k] - m.y[k]) <= 1e-12);
  const Sample cb = sample(CopulaModel(CopulaSpec::cb(1.0)), 100000, 3);
  CHECK(std::abs(xi_n(cb) - 0.3) <= 0.02);
  CHECK(std::abs(rho_n(cb) - 0.7) <= 0.01);
  const Sample g = sample(CopulaModel(CopulaSpec::gaussian(0.707)), 100000, 4);
  CHECK(std::abs(rho_n(g) - 0.690) <= 0.01);

  const Sample again = sample(CopulaModel(CopulaSpec::cb(1.0)), 100000, 3);
  CHECK(again.x == cb.x);
  CHECK(again.y == cb.y);
}

TEST_CASE("estimators approach the population values as n grows") {
  const CopulaModel c(CopulaSpec::cb(1.0));
  auto mean_error = [&](std::size_t n, int reps) {
    double e = 0.0;
    for (int r = 0; r < reps; ++r) {
      const Sample s = sample(c, n, 100 + r);
      e += std::abs(xi_n(s) - 0.3) + std::abs(rho_n(s) - 0.7);
    }
    return e / reps;
  };
  const double e3 = mean_error(1000, 20);
  const double e4 = mean_error(10000, 5);
  const double e5 = mean_error(100000, 2);
  CHECK(e4 < e3);
  CHECK(e5 < e4);
}

TEST_CASE("monte carlo measures") {
  const auto r = measures_monte_carlo(CopulaModel(CopulaSpec::cb(2.0)), 50000, 9);
  CHECK(r.method == Method::MonteCarlo);
  CHECK(std::abs(r.xi - 0.575) < 0.03);
  CHECK(std::abs(r.rho - 0.9) < 0.02);
  CHECK(r.err > 0.0);
}

TEST_CASE("gap search on the boundary family is exact") {
  const GapMaximum row = table1_search(Family::Cb, default_gap_grid(Family::Cb), 64, 1e-9);
  CHECK(std::abs(row.param - 1.0) <= 1e-6);
  CHECK(std::abs(row.gap - 0.4) <= 1e-10);
}

TEST_CASE("gap search on Frank and Joe") {
  // Frank maximizer from an independent Debye-function evaluation of rho.
  const GapMaximum frank = table1_search(Family::Frank, default_gap_grid(Family::Frank), 32, 1e-4);
  CHECK(std::abs(frank.param - 5.745612) <= 1e-3);
  CHECK(std::abs(frank.gap - 0.3827435) <= 1e-6);
  CHECK(std::abs(frank.gap - 0.383) <= 0.005);
  // The flat maximum: the tabulated parameter is within 3e-4 of the optimal gap.
  const CopulaModel tabulated(CopulaSpec::frank(5.529));
  const double rho = rho_integral(tabulated, 32);
  const double xi = xi_integral(tabulated, 32);
  CHECK(std::abs(rho - 0.682) <= 0.005);
  CHECK(std::abs(xi - 0.299) <= 0.005);
  CHECK(frank.gap - (rho - xi) >= 0.0);
  CHECK(frank.gap - (rho - xi) <= 3e-4);

  const GapMaximum joe = table1_search(Family::Joe, default_gap_grid(Family::Joe), 32, 1e-4);
  CHECK(std::abs(joe.param - 2.938) <= 0.005);
  CHECK(std::abs(joe.gap - 0.343) <= 0.005);
}
