#include <cmath>
#include <random>

#include <doctest.h>

#include "levilab/domain.hpp"
#include "levilab/jets.hpp"

using namespace levilab;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return v; }

// independent per-factor distance oracle for the product catalog entries
double annulus_disc_distance_oracle(std::complex<double> z1, std::complex<double> z2) {
  double d1 = std::min(std::abs(z1) - 0.5, 2.0 - std::abs(z1));
  double d2 = 1.0 - std::abs(z2);
  return std::min(d1, d2);
}

} // namespace

TEST_SUITE("domain") {

TEST_CASE("catalog defining functions") {
  DomainSpec ball = catalog_domain("ball");
  CHECK(ball.n() == 2);
  CHECK(ball.rho_at(pt({0, 0, 0, 0})) == doctest::Approx(-1.0));
  CHECK(ball.rho_at(pt({1, 0, 0, 0})) == doctest::Approx(0.0));

  DomainSpec model = catalog_domain("model_type_2k", {{"k", 2}});
  // rho = 2 Re z2 + |z1|^4
  CHECK(model.rho_at(pt({0.5, 0.5, 0.1, 0.3})) ==
        doctest::Approx(0.2 + std::pow(0.5, 2)));

  DomainSpec inf = catalog_domain("infinite_type");
  // smooth extension at the flat locus z2 = 0
  CHECK(inf.rho_at(pt({1, 0, 0, 0})) == doctest::Approx(0.0));
  CHECK(inf.rho_at(pt({0, 0, 0, 0})) == doctest::Approx(-1.0));
  Eigen::VectorXd g = inf.grad_at(pt({1, 0, 0, 0}));
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(std::abs(g[2]) < 1e-12);
  CHECK(std::abs(g[3]) < 1e-12);

  CHECK_THROWS_AS((void)catalog_domain("nope"), Error);
}

TEST_CASE("catalog URIs") {
  DomainSpec d = domain_from_uri("catalog:model_type_2k?k=3");
  CHECK(d.rho_at(pt({0.5, 0.5, 0.0, 0.0})) == doctest::Approx(std::pow(0.5, 3)));
  CHECK_THROWS_AS((void)domain_from_uri("file:nope"), Error);
  CHECK_THROWS_AS((void)domain_from_uri("catalog:ball?k"), Error);
}

TEST_CASE("membership-only entries refuse differential operations") {
  DomainSpec a = catalog_domain("annulus_times_disc");
  CHECK_FALSE(a.smooth());
  CHECK_THROWS_AS((void)a.rho(), Error);
  CHECK_THROWS_AS((void)boundary_project(a, pt({1, 0, 0, 0})), Error);
  CHECK(a.member(pt({1, 0, 0, 0})));
  CHECK_FALSE(a.member(pt({0, 0, 0, 0})));
}

TEST_CASE("boundary projection") {
  DomainSpec ball = catalog_domain("ball");
  BoundaryPoint P = boundary_project(ball, pt({2 * 0.74, 0, 0, 0}));
  CHECK(P.coords[0] == doctest::Approx(1.0));
  CHECK(P.residual <= ball.tol_boundary());

  // rho = 2 Re z2 + |z1|^2, start (0,0,-0.1,0): one Newton step along
  // (0,0,2,0) lands at the origin
  DomainSpec model = catalog_domain("model_type_2k", {{"k", 1}});
  BoundaryPoint Q = boundary_project(model, pt({0, 0, -0.1, 0}));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(Q.coords[static_cast<std::size_t>(i)]) < 1e-12);

  // points already on the sphere stay put
  BoundaryPoint R = boundary_project(ball, pt({0, 1, 0, 0}));
  CHECK(R.coords[1] == doctest::Approx(1.0));
  CHECK(R.residual <= ball.tol_boundary());
}

TEST_CASE("projection residual across the smooth catalog") {
  for (const char* name : {"ball", "model_type_2k", "infinite_type"}) {
    DomainSpec spec = catalog_domain(name);
    auto points = sample_boundary_points(spec, 100, 42);
    for (const auto& P : points) {
      CHECK(std::abs(spec.rho_at(P.coords)) <= spec.tol_boundary());
      CHECK(P.grad_norm >= spec.grad_floor());
    }
  }
}

TEST_CASE("outward normal") {
  DomainSpec ball = catalog_domain("ball");
  BoundaryPoint P = make_boundary_point(ball, pt({1, 0, 0, 0}));
  Eigen::VectorXd nu = outward_normal(ball, P);
  CHECK(nu[0] == doctest::Approx(1.0));
  CHECK(nu.norm() == doctest::Approx(1.0).epsilon(1e-12));

  DomainSpec model = catalog_domain("model_type_2k", {{"k", 2}});
  BoundaryPoint O = make_boundary_point(model, pt({0, 0, 0, 0}));
  Eigen::VectorXd nu2 = outward_normal(model, O);
  CHECK(nu2[2] == doctest::Approx(1.0)); // the Re z2 direction

  BoundaryPoint S = make_boundary_point(ball, pt({0, 1, 0, 0}));
  CHECK(outward_normal(ball, S)[1] == doctest::Approx(1.0));

  // outwardness: P + t nu leaves, P - t nu enters
  for (double t : {1e-4, 1e-2, 0.1}) {
    std::vector<double> up = P.coords, dn = P.coords;
    for (int i = 0; i < 4; ++i) {
      up[static_cast<std::size_t>(i)] += t * nu[i];
      dn[static_cast<std::size_t>(i)] -= t * nu[i];
    }
    CHECK(ball.rho_at(up) > 0.0);
    CHECK(ball.rho_at(dn) < 0.0);
  }
}

TEST_CASE("boundary distance") {
  DomainSpec ball = catalog_domain("ball");
  CHECK(ball.boundary_distance(pt({0, 0, 0, 0})) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ball.boundary_distance(pt({0.5, 0, 0, 0})) == doctest::Approx(0.5).epsilon(1e-9));

  DomainSpec a = catalog_domain("annulus_times_disc");
  CHECK(a.boundary_distance(pt({1, 0, 0, 0})) == doctest::Approx(0.5));

  // against the per-factor oracle on random interior points
  std::mt19937_64 rng(5);
  auto pts = sample_interior_points(a, 50, 11);
  for (const auto& x : pts) {
    std::complex<double> z1(x[0], x[1]), z2(x[2], x[3]);
    CHECK(a.boundary_distance(x) ==
          doctest::Approx(annulus_disc_distance_oracle(z1, z2)).epsilon(1e-12));
  }
  (void)rng;
}

TEST_CASE("distance vanishes exactly on the boundary and is 1-Lipschitz") {
  DomainSpec ball = catalog_domain("ball");
  auto points = sample_boundary_points(ball, 20, 3);
  for (const auto& P : points)
    CHECK(ball.boundary_distance(P.coords) <= 1e-8);

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int t = 0; t < 25; ++t) {
    std::vector<double> x{u(rng), u(rng), u(rng), u(rng)};
    std::vector<double> y{u(rng), u(rng), u(rng), u(rng)};
    double dx = ball.boundary_distance(x);
    double dy = ball.boundary_distance(y);
    double sep = 0.0;
    for (int i = 0; i < 4; ++i) sep += (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]) *
                                       (x[static_cast<std::size_t>(i)] - y[static_cast<std::size_t>(i)]);
    sep = std::sqrt(sep);
    CHECK(std::abs(dx - dy) <= sep + 1e-8);
  }
}

TEST_CASE("example2 membership and distances match the union geometry") {
  DomainSpec d = catalog_domain("example2_nonpseudoconvex");
  // the tunnel: |z1| < 1/2 requires Re z2 < -3/4
  CHECK(d.member(pt({0, 0, -0.9, 0})));
  CHECK_FALSE(d.member(pt({0, 0, 0, 0})));
  CHECK(d.member(pt({1, 0, 0, 0})));
  // distance near the inner annulus wall with the tunnel off
  double delta = d.boundary_distance(pt({0.6, 0, 0, 0}));
  CHECK(delta == doctest::Approx(0.1)); // |z1| - 1/2
  // inside the tunnel the cap wall dominates
  double dt = d.boundary_distance(pt({0, 0, -0.8, 0}));
  CHECK(dt == doctest::Approx(0.05)); // Re z2 + 3/4
}

TEST_CASE("square frame times disc membership") {
  DomainSpec d = catalog_domain("square_frame_times_disc");
  CHECK(d.member(pt({0, 0, 2, 0})));
  CHECK_FALSE(d.member(pt({0, 0, 0.5, 0.5}))); // inside the forbidden square
  CHECK_FALSE(d.member(pt({0, 0, 3.5, 0})));   // outside the big square
  // the paper's harmonic center lies outside
  double a = 0.75 * 1.01;
  CHECK_FALSE(d.member(pt({2 - 0.01, 0, a, a})));
  CHECK(d.boundary_distance(pt({0, 0, 2, 0})) == doctest::Approx(1.0));
}

TEST_CASE("coordinate normalization invariants") {
  DomainSpec ball = catalog_domain("ball");
  for (auto coords : {pt({1, 0, 0, 0}), pt({0, 0, 1, 0}), pt({0.6, 0, 0.8, 0})}) {
    BoundaryPoint P = make_boundary_point(ball, coords);
    NormalizedFrame frame = normalize_coordinates(ball, P);
    const DomainSpec& t = frame.transformed;
    std::vector<double> origin(4, 0.0);
    CHECK(std::abs(t.rho_at(origin)) < 1e-10);
    Eigen::VectorXd g = t.grad_at(origin);
    // d rho / d(Re w_n) = 2, everything else 0
    CHECK(g[2] == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(std::abs(g[0]) < 1e-10);
    CHECK(std::abs(g[1]) < 1e-10);
    CHECK(std::abs(g[3]) < 1e-10);
    Eigen::VectorXcd w = t.wirtinger_grad_at(origin);
    CHECK(std::abs(w[0]) < 1e-10);
    CHECK(std::abs(w[1] - std::complex<double>(1, 0)) < 1e-10);

    // the map and its inverse agree with the substituted expression
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int s = 0; s < 10; ++s) {
      std::vector<double> w_pt{u(rng), u(rng), u(rng), u(rng)};
      std::vector<double> z_pt = frame.from_normalized(w_pt);
      CHECK(t.rho_at(w_pt) == doctest::Approx(ball.rho_at(z_pt)).epsilon(1e-10));
      std::vector<double> back = frame.to_normalized(z_pt);
      for (int i = 0; i < 4; ++i)
        CHECK(back[static_cast<std::size_t>(i)] ==
              doctest::Approx(w_pt[static_cast<std::size_t>(i)]).epsilon(1e-10));
    }
  }
}

TEST_CASE("normalization of the sphere reproduces the height expansion") {
  // at (1,0,0,0): rho in normalized coordinates = 2 Re w2 + |w1|^2 + |w2|^2
  DomainSpec ball = catalog_domain("ball");
  BoundaryPoint P = make_boundary_point(ball, pt({1, 0, 0, 0}));
  NormalizedFrame frame = normalize_coordinates(ball, P);
  std::vector<Poly2> coords(4);
  // disc (zeta, 0): expect exactly |zeta|^2 -> coefficient 1 at (1,1)
  complex_poly_coords(std::vector<std::complex<double>>{{0, 0}, {1, 0}}, 4, coords[0], coords[1]);
  coords[2] = Poly2(4);
  coords[3] = Poly2(4);
  BiJet along_tangent = disc_jet(frame.transformed.rho(), coords, 4);
  CHECK(along_tangent.vanishing_order() == 2);
  CHECK(along_tangent.bidegree(1, 1).real() == doctest::Approx(1.0).epsilon(1e-10));

  // model at the origin is already in normal form: scale 1, normal row e2
  DomainSpec model = catalog_domain("model_type_2k", {{"k", 2}});
  BoundaryPoint O = make_boundary_point(model, pt({0, 0, 0, 0}));
  NormalizedFrame mf = normalize_coordinates(model, O);
  CHECK(mf.scale == doctest::Approx(1.0));
  CHECK(std::abs(mf.unitary(1, 1) - std::complex<double>(1, 0)) < 1e-12);
  CHECK(std::abs(mf.unitary(1, 0)) < 1e-12);
}

TEST_CASE("membership classification bands") {
  DomainSpec ball = catalog_domain("ball");
  CHECK(ball.member(pt({0.5, 0, 0, 0})));
  CHECK_FALSE(ball.member(pt({1.5, 0, 0, 0})));
  CHECK(ball.in_closure(pt({1, 0, 0, 0})));
  CHECK(ball.on_boundary(pt({1, 0, 0, 0})));
  CHECK_FALSE(ball.on_boundary(pt({0.9, 0, 0, 0})));
}

} // TEST_SUITE
