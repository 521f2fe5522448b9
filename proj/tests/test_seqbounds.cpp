#include <cmath>
#include <random>

#include "doctest.h"
#include "sparsewave/seqbounds.hpp"

using namespace spw;

TEST_CASE("affine bound reduces to x0 for the identity iteration") {
  std::vector<double> a(10, 1.0), b(10, 0.0);
  CHECK(affine_iteration_bound(a, b, 3.0) == doctest::Approx(3.0));
}

TEST_CASE("affine bound with a = 0 is x0 plus the drift sum") {
  std::vector<double> a(5, 0.0), b{0.5, 1.0, 0.25, 0.0, 2.0};
  CHECK(affine_iteration_bound(a, b, 1.0) == doctest::Approx(1.0 + 3.75));
}

TEST_CASE("affine bound rejects negative inputs") {
  CHECK_THROWS_AS(affine_iteration_bound({-1.0}, {0.0}, 1.0), InvalidInput);
  CHECK_THROWS_AS(affine_iteration_bound({1.0}, {-0.1}, 1.0), InvalidInput);
  CHECK_THROWS_AS(affine_iteration_bound({1.0}, {0.0}, -2.0), InvalidInput);
}

TEST_CASE("affine bound dominates brute-force iteration") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ua(0.0, 2.0), ub(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> a(20), b(20);
    for (double& x : a) x = ua(rng);
    for (double& x : b) x = ub(rng);
    const double x0 = ub(rng);
    // the bound covers the iterate fed by a[0..n], b[0..n]; check every
    // truncation (earlier iterates can exceed the full-length bound when
    // a trailing contraction shrinks the suffix products)
    double x = x0;
    for (int n = 0; n < 20; ++n) {
      x = a[n] * x + b[n];
      std::vector<double> ah(a.begin(), a.begin() + n + 1);
      std::vector<double> bh(b.begin(), b.begin() + n + 1);
      CHECK(x <= affine_iteration_bound(ah, bh, x0) * (1 + 1e-12));
    }
  }
}

TEST_CASE("poly exp max closed form and tightness") {
  CHECK(poly_exp_max(1.0, 1.0) == doctest::Approx(1.0 / std::exp(1.0)).epsilon(1e-15));
  // doubling eps divides the value by 2^j
  for (double j : {1.0, 2.5, 7.0})
    CHECK(poly_exp_max(j, 2.0) ==
          doctest::Approx(poly_exp_max(j, 1.0) / std::pow(2.0, j)).epsilon(1e-13));
  // dense sampling near the maximizer x* = j/eps never exceeds, and approaches
  const double j = 3.0, eps = 0.7;
  const double value = poly_exp_max(j, eps);
  double best = 0;
  for (int i = 0; i <= 400000; ++i) {
    const double x = 10.0 * j / eps * i / 400000.0;
    if (x == 0) continue;
    const double f = std::pow(x, j) * std::exp(-eps * x);
    CHECK(f <= value * (1 + 1e-12));
    best = std::max(best, f);
  }
  CHECK(value - best < 1e-6 * value);
  CHECK_THROWS_AS(poly_exp_max(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(poly_exp_max(1.0, -1.0), InvalidInput);
}

TEST_CASE("product asymptotics reduces to partial sums when q vanishes") {
  std::vector<cplx> q(6, 0.0), d{1.0, cplx(0, 1), 0.5, 0.0, -0.25, 0.1};
  ProductAsymptotics pa = product_asymptotics(q, d, cplx(2.0, 0.0), 1.0, 1.0);
  REQUIRE(pa.iterates.size() == 7);
  cplx expect(2.0, 0.0);
  for (int n = 0; n < 6; ++n) {
    CHECK(std::abs(pa.iterates[n + 1] - (expect + d[n])) < 1e-15);
    expect += d[n];
  }
}

TEST_CASE("product envelope dominates random iterations") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int len = 30;
    const double alpha = 0.4;
    std::vector<cplx> q(len), d(len);
    for (cplx& z : q) z = std::polar(0.5 * u(rng), 2 * PI * u(rng));
    for (int j = 0; j < len; ++j) d[j] = std::polar(u(rng) * std::exp(-alpha * j), 2 * PI * u(rng));
    const cplx x0 = std::polar(u(rng), 2 * PI * u(rng));
    ProductAsymptotics pa = product_asymptotics(q, d, x0, alpha, 1.0);
    for (std::size_t n = 0; n < pa.iterates.size(); ++n)
      CHECK(std::abs(pa.iterates[n]) <= pa.envelope[n] * (1 + 1e-12));
  }
}

TEST_CASE("pure product case tracks the exponential comparison") {
  // d = 0: x_n = x0 prod (1 + q_j); envelope via |(1+z)e^{-z}| <= e^{|z|^2}
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int len = 40;
    std::vector<cplx> q(len), d(len, 0.0);
    for (cplx& z : q) z = std::polar(0.5 * u(rng), 2 * PI * u(rng));
    ProductAsymptotics pa = product_asymptotics(q, d, cplx(1.0, 0.0), 1.0, 0.0);
    for (std::size_t n = 0; n < pa.iterates.size(); ++n)
      CHECK(std::abs(pa.iterates[n]) <= pa.envelope[n] * (1 + 1e-12));
  }
}
