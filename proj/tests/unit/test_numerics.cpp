#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "xirho/error.hpp"
#include "xirho/numerics.hpp"

using namespace xirho;

TEST_CASE("two-point rule is the textbook one") {
  const QuadRule r = gauss_legendre(2);
  REQUIRE(r.nodes.size() == 2);
  CHECK(std::abs(std::abs(r.nodes[0]) - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(r.nodes[0] == doctest::Approx(-r.nodes[1]).epsilon(1e-15));
  CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r.weights[1] == doctest::Approx(1.0).epsilon(1e-15));
  const double x2 = integrate([](double x) { return x * x; }, -1.0, 1.0, r);
  CHECK(std::abs(x2 - 2.0 / 3.0) < 1e-15);
}

TEST_CASE("rules are symmetric with weights summing to two") {
  for (int n : {2, 3, 7, 16, 64, 128, 257, 512}) {
    const QuadRule r = gauss_legendre(n);
    const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
    CHECK(std::abs(total - 2.0) < 1e-14);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(r.nodes[i] + r.nodes[n - 1 - i]) < 1e-14);
      CHECK(r.weights[i] > 0.0);
    }
  }
}

TEST_CASE("rule size outside [2, 512] is rejected") {
  CHECK_THROWS_AS(gauss_legendre(1), Error);
  CHECK_THROWS_AS(gauss_legendre(513), Error);
}

TEST_CASE("degree 2n-1 polynomials are integrated exactly") {
  for (int n : {3, 8, 20}) {
    const QuadRule& r = cached_gauss_legendre(n);
    const int deg = 2 * n - 1;
    const double got = integrate([&](double x) { return std::pow(x, deg - 1) + std::pow(x, deg); }, 0.0, 1.0, r);
    CHECK(std::abs(got - (1.0 / deg + 1.0 / (deg + 1))) < 1e-13);
  }
}

TEST_CASE("mapped tensor rule integrates uv to 1/4") {
  const QuadRule& r = cached_gauss_legendre(8);
  const double got = integrate([&](double u) { return integrate([&](double v) { return u * v; }, 0.0, 1.0, r); },
                               0.0, 1.0, r);
  CHECK(std::abs(got - 0.25) <= 1e-15);
}

TEST_CASE("halving panels: spectral gain on smooth, first-order gain on kinked integrands") {
  auto composite = [](const std::function<double(double)>& f, int panels, int nodes) {
    const auto edges = panel_edges(0.0, 1.0, panels, {});
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) s += integrate(f, edges[k], edges[k + 1], cached_gauss_legendre(nodes));
    return s;
  };
  auto smooth = [](double x) { return std::exp(3.0 * x) * std::cos(5.0 * x); };
  const double smooth_exact = (std::exp(3.0) * (3.0 * std::cos(5.0) + 5.0 * std::sin(5.0)) - 3.0) / 34.0;
  const double e1 = std::abs(composite(smooth, 2, 6) - smooth_exact);
  const double e2 = std::abs(composite(smooth, 4, 6) - smooth_exact);
  CHECK(e1 / e2 >= 100.0);

  // kink at 1/3, never on a panel edge
  auto kinked = [](double x) { return std::abs(x - 1.0 / 3.0); };
  const double kinked_exact = (1.0 / 9.0 + 4.0 / 9.0) / 2.0;
  const double k1 = std::abs(composite(kinked, 5, 4) - kinked_exact);
  const double k2 = std::abs(composite(kinked, 10, 4) - kinked_exact);
  CHECK(k1 / k2 >= 2.0);
}

TEST_CASE("panel edges include interior breaks only") {
  const std::vector<double> breaks{0.3, -0.1, 0.5, 1.2, 0.3};
  const auto e = panel_edges(0.0, 1.0, 2, breaks);
  CHECK(e == std::vector<double>{0.0, 0.3, 0.5, 1.0});
}

TEST_CASE("pairwise sum matches exact sums") {
  std::vector<double> v(1000, 0.1);
  CHECK(std::abs(pairwise_sum(v) - 100.0) < 1e-12);
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}

TEST_CASE("find_root locates sqrt(2)") {
  const double r = find_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-14);
  CHECK(std::abs(r - std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("find_root on a monotone piecewise-linear function converges within 60 evaluations") {
  int calls = 0;
  auto f = [&](double g) {
    ++calls;
    double s = 0.0;
    for (int i = 0; i < 400; ++i) s += std::clamp(1.0 - g / 2.0 - (i + 0.5) / 400.0, 0.0, 1.0);
    return s / 400.0 - 0.37;
  };
  const double g = find_root(f, -2.0, 2.0, 1e-13);
  CHECK(std::abs(f(g)) < 1e-12);
  CHECK(calls <= 61);
}

TEST_CASE("find_root without a sign change throws NoBracket") {
  try {
    find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoBracket);
  }
}

TEST_CASE("golden section finds an interior maximum") {
  const auto r = golden_section_max([](double x) { return -(x - 0.7) * (x - 0.7); }, 0.0, 2.0, 1e-9);
  CHECK(std::abs(r.x - 0.7) < 1e-8);
}

TEST_CASE("average ranks") {
  CHECK(ranks(std::vector<double>{10, 20, 30}) == std::vector<double>{1, 2, 3});
  CHECK(ranks(std::vector<double>{5, 5}) == std::vector<double>{1.5, 1.5});
  CHECK(ranks(std::vector<double>{3, 2, 1}) == std::vector<double>{3, 2, 1});
  CHECK(ranks(std::vector<double>{2, 1, 2, 0}) == std::vector<double>{3.5, 2, 3.5, 1});
}

TEST_CASE("normal cdf and quantile are inverse") {
  for (double p : {1e-10, 1e-4, 0.025, 0.3, 0.5, 0.8, 0.975, 1 - 1e-6}) {
    CHECK(std::abs(normal_cdf(normal_quantile(p)) - p) < 1e-14 + 1e-12 * p);
  }
  CHECK(std::abs(normal_cdf(1.959963984540054) - 0.975) < 1e-15);
}

TEST_CASE("bivariate normal cdf at known values") {
  // Orthant probabilities at the origin: 1/4 + asin(r) / (2 pi).
  for (double r : {-0.95, -0.5, 0.0, 0.3, 0.707, 0.99}) {
    CHECK(std::abs(bivariate_normal_cdf(0.0, 0.0, r) - (0.25 + std::asin(r) / (2.0 * M_PI))) < 1e-14);
  }
  CHECK(std::abs(bivariate_normal_cdf(1.0, -0.5, 0.0) - normal_cdf(1.0) * normal_cdf(-0.5)) < 1e-15);
  // Symmetry in the arguments and the limit r -> 1.
  CHECK(std::abs(bivariate_normal_cdf(0.3, -1.2, 0.6) - bivariate_normal_cdf(-1.2, 0.3, 0.6)) < 1e-15);
  CHECK(std::abs(bivariate_normal_cdf(0.4, 1.0, 0.999999) - normal_cdf(0.4)) < 1e-3);
}

TEST_CASE("bivariate normal cdf agrees with one-dimensional integration") {
  // P(X <= x, Y <= y) = int_{-inf}^{x} phi(s) Phi((y - r s) / sqrt(1 - r^2)) ds
  const QuadRule& rule = cached_gauss_legendre(200);
  for (double r : {-0.8, 0.2, 0.707, 0.9}) {
    for (auto [x, y] : {std::pair{0.5, -0.3}, std::pair{-1.5, 1.1}, std::pair{2.0, 2.5}}) {
      const double q = integrate(
          [&](double s) {
            return std::exp(-0.5 * s * s) / std::sqrt(2.0 * M_PI) * normal_cdf((y - r * s) / std::sqrt(1.0 - r * r));
          },
          -12.0, x, rule);
      CHECK(std::abs(bivariate_normal_cdf(x, y, r) - q) < 1e-12);
    }
  }
}

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 0);
  RngStream b(42, 0);
  RngStream c(42, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
  RngStream u(7);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x > 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  CHECK(std::abs(sum / 100000 - 0.5) < 0.005);
  RngStream s1 = RngStream(9).split(3);
  RngStream s2 = RngStream(9).split(3);
  CHECK(s1.next_u64() == s2.next_u64());
}
