#include <cmath>
#include <random>

#include <doctest.h>

#include "levilab/errors.hpp"
#include "levilab/lipschitz.hpp"

using namespace levilab;

TEST_SUITE("lipschitz") {

TEST_CASE("second difference of a quadratic is 2h^2") {
  Fn1D g = [](double x) { return x * x; };
  for (double x : {-1.0, 0.0, 0.7}) {
    for (double h : {0.1, 0.01, 0.003}) {
      CHECK(forward_difference(g, x, h, 2) == doctest::Approx(2 * h * h).epsilon(1e-9));
    }
  }
}

TEST_CASE("third difference annihilates quadratics") {
  // g(x+3h) - 3g(x+2h) + 3g(x+h) - g(x) for g = x^2
  Fn1D g = [](double x) { return x * x; };
  for (double x : {-0.4, 0.0, 1.2}) {
    double d = forward_difference(g, x, 0.05, 3);
    double direct = g(x + 0.15) - 3 * g(x + 0.1) + 3 * g(x + 0.05) - g(x);
    CHECK(std::abs(d) < 1e-12);
    CHECK(d == doctest::Approx(direct));
  }
  // second difference expansion g(x+2h) - 2g(x+h) + g(x)
  Fn1D cube = [](double x) { return x * x * x; };
  double d2 = forward_difference(cube, 0.3, 0.02, 2);
  CHECK(d2 == doctest::Approx(cube(0.34) - 2 * cube(0.32) + cube(0.3)).epsilon(1e-12));
}

TEST_CASE("constants vanish under any difference order") {
  Fn1D g = [](double) { return 3.25; };
  for (int j = 1; j <= 5; ++j) CHECK(forward_difference(g, 0.2, 0.1, j) == doctest::Approx(0.0));
}

TEST_CASE("difference recurrence: delta^j = delta(delta^(j-1))") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Fn1D g = [](double x) { return std::exp(0.5 * x) + x * x * x; };
  for (int t = 0; t < 40; ++t) {
    double x = u(rng), h = 0.01 + 0.1 * std::abs(u(rng));
    int j = 2 + static_cast<int>(rng() % 3);
    double lhs = forward_difference(g, x, h, j);
    Fn1D inner = [&](double y) { return forward_difference(g, y, h, j - 1); };
    double rhs = forward_difference(inner, x, h, 1);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
  }
}

TEST_CASE("invalid sample points raise") {
  Fn1D g = [](double x) { return std::sqrt(x); }; // NaN for x < 0
  CHECK_THROWS_AS((void)forward_difference(g, -0.5, 0.1, 2), Error);
}

TEST_CASE("exponent of |x|^(1/2) is one half") {
  Fn1D g = [](double x) { return std::sqrt(std::abs(x)); };
  LipschitzEstimate est = lipschitz_exponent(g, -1.0, 1.0, 2, 65);
  CHECK(est.alpha == doctest::Approx(0.5).epsilon(0.1));
  CHECK(std::abs(est.alpha - 0.5) < 0.05);
  CHECK_FALSE(est.saturated);
}

TEST_CASE("exponent of |x| is one, tracked off the coarse grid") {
  Fn1D g = [](double x) { return std::abs(x - 0.237); }; // kink away from grid points
  LipschitzEstimate est = lipschitz_exponent(g, -1.0, 1.0, 2, 65);
  CHECK(std::abs(est.alpha - 1.0) < 0.05);
}

TEST_CASE("smooth functions saturate at alpha = j") {
  Fn1D g = [](double x) { return x; };
  LipschitzEstimate est = lipschitz_exponent(g, -1.0, 1.0, 2, 64);
  CHECK(est.saturated);
  CHECK(est.alpha == doctest::Approx(2.0));
}

TEST_CASE("input validation") {
  Fn1D g = [](double x) { return x; };
  CHECK_THROWS_AS((void)lipschitz_exponent(g, -1.0, 1.0, 2, 8), Error);
  CHECK_THROWS_AS((void)lipschitz_exponent(g, 1.0, -1.0, 2, 64), Error);
}

} // TEST_SUITE
