#include <cmath>
#include <random>

#include <doctest.h>

#include "levilab/jets.hpp"

using namespace levilab;

namespace {

// Brute-force univariate polynomial algebra, independent of the jet engine:
// composes a polynomial expression with polynomial curve coordinates by
// recursion over the tree.
struct TestPoly {
  std::vector<double> c; // c[i] t^i, untruncated

  static TestPoly constant(double v) { return {{v}}; }

  double get(std::size_t i) const { return i < c.size() ? c[i] : 0.0; }
};

TestPoly operator+(const TestPoly& a, const TestPoly& b) {
  TestPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.get(i) + b.get(i);
  return r;
}
TestPoly operator-(const TestPoly& a, const TestPoly& b) {
  TestPoly r;
  r.c.resize(std::max(a.c.size(), b.c.size()), 0.0);
  for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] = a.get(i) - b.get(i);
  return r;
}
TestPoly operator*(const TestPoly& a, const TestPoly& b) {
  TestPoly r;
  if (a.c.empty() || b.c.empty()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.c.size(); ++i)
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  return r;
}

TestPoly compose_poly_expr(const Expr& e, const std::vector<TestPoly>& coords) {
  switch (e->kind) {
    case ExprKind::constant: return TestPoly::constant(e->value);
    case ExprKind::variable: return coords[static_cast<std::size_t>(e->var)];
    case ExprKind::add: return compose_poly_expr(e->a, coords) + compose_poly_expr(e->b, coords);
    case ExprKind::sub: return compose_poly_expr(e->a, coords) - compose_poly_expr(e->b, coords);
    case ExprKind::mul: return compose_poly_expr(e->a, coords) * compose_poly_expr(e->b, coords);
    case ExprKind::ipow: {
      TestPoly base = compose_poly_expr(e->a, coords);
      TestPoly r = TestPoly::constant(1.0);
      for (int i = 0; i < e->power; ++i) r = r * base;
      return r;
    }
    default: throw std::runtime_error("oracle handles polynomial nodes only");
  }
}

Expr random_poly_expr(std::mt19937_64& rng, int dim, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
  std::uniform_real_distribution<double> cst(-2.0, 2.0);
  switch (pick(rng)) {
    case 0: return constant(cst(rng));
    case 1: return variable(static_cast<int>(rng() % dim));
    case 2: return add(random_poly_expr(rng, dim, depth - 1), random_poly_expr(rng, dim, depth - 1));
    case 3: return sub(random_poly_expr(rng, dim, depth - 1), random_poly_expr(rng, dim, depth - 1));
    case 4: return mul(random_poly_expr(rng, dim, depth - 1), random_poly_expr(rng, dim, depth - 1));
    default: return ipow(random_poly_expr(rng, dim, depth - 1), 2 + static_cast<int>(rng() % 2));
  }
}

} // namespace

TEST_SUITE("jets") {

TEST_CASE("curve jet of a reparametrized coordinate") {
  // e = x1 along gamma(t) = (t^2, 0): jet (0, 0, 1, 0, ...)
  Jet1D j = curve_jet(variable(0), {{0.0, 0.0, 1.0}, {0.0}}, 6);
  CHECK(j.c[0] == doctest::Approx(0.0));
  CHECK(j.c[1] == doctest::Approx(0.0));
  CHECK(j.c[2] == doctest::Approx(1.0));
  CHECK(j.c[3] == doctest::Approx(0.0));
  CHECK(j.first_nonzero() == 2);
}

TEST_CASE("polynomial composition against brute-force polynomial algebra") {
  std::mt19937_64 rng(555);
  std::uniform_real_distribution<double> cst(-1.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    Expr e = random_poly_expr(rng, 2, 3);
    std::vector<TestPoly> oracle_coords;
    std::vector<std::vector<double>> jet_coords;
    for (int v = 0; v < 2; ++v) {
      std::vector<double> cs;
      int deg = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i <= deg; ++i) cs.push_back(cst(rng));
      oracle_coords.push_back({cs});
      jet_coords.push_back(cs);
    }
    int M = 10;
    Jet1D got = curve_jet(e, jet_coords, M);
    TestPoly want = compose_poly_expr(e, oracle_coords);
    double scale = 1.0;
    for (double v : want.c) scale = std::max(scale, std::abs(v));
    for (int i = 0; i <= M; ++i)
      CHECK(std::abs(got.c[static_cast<std::size_t>(i)] - want.get(static_cast<std::size_t>(i))) <=
            1e-10 * scale);
  }
}

TEST_CASE("series nodes: exp, log, sqrt, division") {
  // f(t) = exp(t) => coefficients 1/k!
  Jet1D je = curve_jet(exp_of(variable(0)), {{0.0, 1.0}}, 8);
  double fact = 1.0;
  for (int k = 0; k <= 8; ++k) {
    CHECK(je.c[static_cast<std::size_t>(k)] == doctest::Approx(1.0 / fact).epsilon(1e-12));
    fact *= (k + 1);
  }
  // f(t) = log(1+t) => (-1)^(k+1)/k
  Jet1D jl = curve_jet(log_of(add(constant(1.0), variable(0))), {{0.0, 1.0}}, 8);
  CHECK(jl.c[0] == doctest::Approx(0.0));
  for (int k = 1; k <= 8; ++k)
    CHECK(jl.c[static_cast<std::size_t>(k)] ==
          doctest::Approx((k % 2 ? 1.0 : -1.0) / k).epsilon(1e-12));
  // f(t) = 1/(1-t) => all ones
  Jet1D jd = curve_jet(div(constant(1.0), sub(constant(1.0), variable(0))), {{0.0, 1.0}}, 8);
  for (int k = 0; k <= 8; ++k) CHECK(jd.c[static_cast<std::size_t>(k)] == doctest::Approx(1.0));
  // f(t) = sqrt(1+t): ratio check against the binomial series
  Jet1D js = curve_jet(sqrt_of(add(constant(1.0), variable(0))), {{0.0, 1.0}}, 6);
  CHECK(js.c[0] == doctest::Approx(1.0));
  CHECK(js.c[1] == doctest::Approx(0.5));
  CHECK(js.c[2] == doctest::Approx(-0.125));
}

TEST_CASE("disc jets expose the vanishing order") {
  // 2 Re z2 + |z1|^4 along (zeta, 0): order 4
  Expr rho = add(mul(constant(2.0), variable(2)), ipow(abs_sq(0), 2));
  std::vector<Poly2> coords(4);
  complex_poly_coords(std::vector<std::complex<double>>{{0.0, 0.0}, {1.0, 0.0}}, 8, coords[0],
                      coords[1]);
  coords[2] = Poly2(8);
  coords[3] = Poly2(8);
  BiJet bj = disc_jet(rho, coords, 8);
  CHECK(bj.vanishing_order() == 4);
  // |zeta|^4 = (s^2+t^2)^2 has bidegree coefficient 1 at (2,2)
  CHECK(bj.bidegree(2, 2).real() == doctest::Approx(1.0));
  CHECK(std::abs(bj.bidegree(2, 2).imag()) < 1e-12);
  CHECK(std::abs(bj.bidegree(4, 0)) < 1e-12);

  // |z1|^2 - 1 along (zeta, 0): order-0 coefficient -1
  Expr rho2 = sub(abs_sq(0), constant(1.0));
  BiJet bj2 = disc_jet(rho2, coords, 4);
  CHECK(bj2.bidegree(0, 0).real() == doctest::Approx(-1.0));
  CHECK(bj2.vanishing_order() == 0);
}

TEST_CASE("flat factors: exp(-1/|zeta|^2) vanishes to every order") {
  // rho = |z1|^2 + 2 exp(-1/|z2|^2) - 1 along (1, zeta): identically the
  // flat function, so every jet coefficient is zero
  Expr rho = sub(add(abs_sq(0), mul(constant(2.0), exp_of(div(constant(-1.0), abs_sq(1))))),
                 constant(1.0));
  std::vector<Poly2> coords(4);
  complex_poly_coords(std::vector<std::complex<double>>{{1.0, 0.0}}, 12, coords[0], coords[1]);
  complex_poly_coords(std::vector<std::complex<double>>{{0.0, 0.0}, {1.0, 0.0}}, 12, coords[2],
                      coords[3]);
  BiJet bj = disc_jet(rho, coords, 12);
  CHECK(bj.vanishing_order() == 13); // every stored coefficient is exactly zero

  // a univariate probe of the same flat composite
  Jet1D j = curve_jet(exp_of(div(constant(-1.0), ipow(variable(0), 2))), {{0.0, 1.0}}, 8);
  for (double c : j.c) CHECK(c == 0.0);
}

TEST_CASE("poles that never flatten raise domain errors") {
  // 1/t has a genuine pole along the curve
  CHECK_THROWS_AS((void)curve_jet(div(constant(1.0), variable(0)), {{0.0, 1.0}}, 4), Error);
  // exp(+1/t^2) blows up
  CHECK_THROWS_AS(
      (void)curve_jet(exp_of(div(constant(1.0), ipow(variable(0), 2))), {{0.0, 1.0}}, 4), Error);
  // division by an identically-zero composition
  CHECK_THROWS_AS((void)curve_jet(div(constant(1.0), variable(1)), {{0.0, 1.0}, {0.0}}, 4), Error);
}

TEST_CASE("flat-pole products and their limits") {
  // exp(-1/t^2)/t^3 -> 0 with all derivatives; jets see an exact zero
  Expr e = div(exp_of(div(constant(-1.0), ipow(variable(0), 2))), ipow(variable(0), 3));
  Jet1D j = curve_jet(e, {{0.0, 1.0}}, 8);
  for (double c : j.c) CHECK(c == 0.0);
}

TEST_CASE("eval_limit extends smoothly over removable singularities") {
  // x1^2 + 2 exp(-1/(x3^2+x4^2)) at the flat locus x3 = x4 = 0
  Expr e = add(ipow(variable(0), 2), mul(constant(2.0), exp_of(div(constant(-1.0), abs_sq(1)))));
  std::vector<double> x{1.0, 0.0, 0.0, 0.0};
  CHECK(eval_limit(e, x) == doctest::Approx(1.0));
  // strict evaluation refuses the same point
  CHECK_THROWS_AS((void)eval(e, x), Error);
  // genuinely singular points still raise
  Expr bad = div(constant(1.0), variable(0));
  std::vector<double> zero4{0.0, 0.0, 0.0, 0.0};
  CHECK_THROWS_AS((void)eval_limit(bad, zero4), Error);
}

TEST_CASE("jet order cap is enforced") {
  CHECK_THROWS_AS((void)curve_jet(variable(0), {{0.0, 1.0}}, kMaxJetOrder + 1), Error);
}

} // TEST_SUITE
