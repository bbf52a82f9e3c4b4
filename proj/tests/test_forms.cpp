#include <cmath>
#include <random>

#include <doctest.h>

#include "levilab/forms.hpp"
#include "levilab/jets.hpp"

using namespace levilab;

namespace {

std::vector<double> pt(std::initializer_list<double> v) { return v; }

// finite-difference Hessian entries, independent of the symbolic path
double fd_hessian_entry(const DomainSpec& spec, const std::vector<double>& x, int i, int j,
                        double h = 1e-5) {
  auto at = [&](double di, double dj) {
    std::vector<double> y = x;
    y[static_cast<std::size_t>(i)] += di;
    y[static_cast<std::size_t>(j)] += dj;
    return spec.rho_at(y);
  };
  if (i == j) return (at(h, 0) - 2 * at(0, 0) + at(-h, 0)) / (h * h);
  return (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h);
}

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = std::complex<double>(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  return qr.householderQ();
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  return qr.householderQ();
}

} // namespace

TEST_SUITE("forms") {

TEST_CASE("tangent frames kill the gradients") {
  DomainSpec ball = catalog_domain("ball");
  BoundaryPoint P = make_boundary_point(ball, pt({1, 0, 0, 0}));
  TangentFrame f = tangent_frame(ball, P);

  // complex basis = span{(0,1)}: rho_z = conj(z) = (1,0) at P
  REQUIRE(f.complex_basis.cols() == 1);
  CHECK(std::abs(f.complex_basis(0, 0)) < 1e-12);
  CHECK(std::abs(std::abs(f.complex_basis(1, 0)) - 1.0) < 1e-12);

  DomainSpec model = catalog_domain("model_type_2k", {{"k", 2}});
  BoundaryPoint O = make_boundary_point(model, pt({0, 0, 0, 0}));
  TangentFrame fm = tangent_frame(model, O);
  // tangential direction is z1 after the normal points along Re z2
  CHECK(std::abs(std::abs(fm.complex_basis(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(fm.complex_basis(1, 0)) < 1e-12);

  // orthogonality of the real basis against grad rho on random sphere points
  for (const BoundaryPoint& Q : sample_boundary_points(ball, 100, 77)) {
    TangentFrame fq = tangent_frame(ball, Q);
    Eigen::VectorXd g = ball.grad_at(Q.coords);
    for (int c = 0; c < fq.real_basis.cols(); ++c)
      CHECK(std::abs(g.dot(fq.real_basis.col(c))) < 1e-10);
    Eigen::VectorXcd rz = ball.wirtinger_grad_at(Q.coords);
    for (int c = 0; c < fq.complex_basis.cols(); ++c) {
      std::complex<double> pair = 0.0;
      for (int j = 0; j < 2; ++j) pair += rz[j] * fq.complex_basis(j, c);
      CHECK(std::abs(pair) < 1e-10);
    }
    // orthonormality
    Eigen::MatrixXd gram = fq.real_basis.transpose() * fq.real_basis;
    CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("restricted Hessian of the sphere is 2I") {
  DomainSpec ball = catalog_domain("ball");
  for (const BoundaryPoint& P : sample_boundary_points(ball, 10, 5)) {
    TangentFrame f = tangent_frame(ball, P);
    Eigen::MatrixXd H = hessian_form(ball, P, f);
    CHECK((H - 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("saddle-type surfaces have indefinite restricted Hessians") {
  // rho = x1^2 - x2^2 + x3 - 1 near a point whose tangent space carries both signs
  Expr rho = sub(add(sub(ipow(variable(0), 2), ipow(variable(1), 2)), variable(2)),
                 constant(1.0));
  DomainSpec spec = DomainSpec::smooth_domain("saddle", 2, rho, Box::cube(4, 3.0));
  BoundaryPoint P = make_boundary_point(spec, pt({0, 0, 1, 0}));
  TangentFrame f = tangent_frame(spec, P);
  Eigen::MatrixXd H = hessian_form(spec, P, f);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  CHECK(es.eigenvalues().minCoeff() < -1e-8);
  CHECK(es.eigenvalues().maxCoeff() > 1e-8);
  // the zero tangent vector pairs to zero trivially
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  CHECK(zero.dot(H * zero) == 0.0);
}

TEST_CASE("restricted Levi forms on the catalog") {
  DomainSpec ball = catalog_domain("ball");
  BoundaryPoint P = make_boundary_point(ball, pt({1, 0, 0, 0}));
  TangentFrame f = tangent_frame(ball, P);
  Eigen::MatrixXcd L = levi_form(ball, P, f);
  REQUIRE(L.rows() == 1);
  CHECK(L(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(L(0, 0).imag()) < 1e-12);

  DomainSpec m2 = catalog_domain("model_type_2k", {{"k", 2}});
  BoundaryPoint O = make_boundary_point(m2, pt({0, 0, 0, 0}));
  Eigen::MatrixXcd L2 = levi_form(m2, O, tangent_frame(m2, O));
  CHECK(std::abs(L2(0, 0)) < 1e-12);

  DomainSpec m1 = catalog_domain("model_type_2k", {{"k", 1}});
  BoundaryPoint O1 = make_boundary_point(m1, pt({0, 0, 0, 0}));
  Eigen::MatrixXcd L1 = levi_form(m1, O1, tangent_frame(m1, O1));
  CHECK(L1(0, 0).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("second derivatives agree with finite differences") {
  DomainSpec m2 = catalog_domain("model_type_2k", {{"k", 2}});
  BoundaryPoint P = make_boundary_point(m2, pt({0.4, 0.2, -0.5 * std::pow(0.2, 2), 0.1}));
  Eigen::MatrixXd H = real_hessian(m2, P);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      double fd = fd_hessian_entry(m2, P.coords, i, j);
      CHECK(std::abs(H(i, j) - fd) < 1e-4 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("classification flags across the catalog") {
  DomainSpec ball = catalog_domain("ball");
  for (const BoundaryPoint& P : sample_boundary_points(ball, 20, 9)) {
    FormReport rep = classify_point(ball, P);
    CHECK(rep.convex);
    CHECK(rep.strictly_convex);
    CHECK(rep.levi_pseudoconvex);
    CHECK(rep.strictly_pseudoconvex);
  }

  DomainSpec m2 = catalog_domain("model_type_2k", {{"k", 2}});
  FormReport rep = classify_point(m2, make_boundary_point(m2, pt({0, 0, 0, 0})));
  CHECK(rep.convex);
  CHECK(rep.levi_pseudoconvex);
  CHECK_FALSE(rep.strictly_pseudoconvex);

  // 2 Re z2 - |z1|^2 + |z1|^4: Levi value -1 along the tangent at 0
  Expr rho = add(sub(mul(constant(2.0), variable(2)), abs_sq(0)), ipow(abs_sq(0), 2));
  DomainSpec bad = DomainSpec::smooth_domain("concave_model", 2, rho, Box::cube(4, 1.2));
  FormReport rb = classify_point(bad, make_boundary_point(bad, pt({0, 0, 0, 0})));
  CHECK_FALSE(rb.levi_pseudoconvex);
  CHECK(rb.levi_eigenvalues.front() == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("matrices are symmetric/Hermitian and quadratic forms are consistent") {
  DomainSpec m2 = catalog_domain("model_type_2k", {{"k", 2}});
  BoundaryPoint P = boundary_project(m2, pt({0.3, -0.2, -0.1, 0.4}));
  TangentFrame f = tangent_frame(m2, P);
  Eigen::MatrixXd H = hessian_form(m2, P, f);
  CHECK((H - H.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  Eigen::MatrixXcd L = levi_form(m2, P, f);
  CHECK((L - L.adjoint()).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXd Hfull = real_hessian(m2, P);
  Eigen::MatrixXcd Lfull = complex_hessian(m2, P);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    // random real tangent vector through the frame
    Eigen::VectorXd c(3);
    for (int i = 0; i < 3; ++i) c[i] = g(rng);
    Eigen::VectorXd w = f.real_basis * c;
    double direct = w.dot(Hfull * w);
    double restricted = c.dot(H * c);
    CHECK(std::abs(direct - restricted) < 1e-9 * (1.0 + std::abs(direct)));
  }
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXcd c(1);
    c[0] = std::complex<double>(g(rng), g(rng));
    Eigen::VectorXcd xi = f.complex_basis * c;
    std::complex<double> direct = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) direct += Lfull(i, j) * xi[i] * std::conj(xi[j]);
    std::complex<double> restricted = (c.transpose() * L * c.conjugate())(0, 0);
    CHECK(std::abs(direct - restricted) < 1e-9 * (1.0 + std::abs(direct)));
  }
}

TEST_CASE("convexity implies Levi pseudoconvexity across the catalog") {
  for (const char* name : {"ball", "model_type_2k", "infinite_type"}) {
    DomainSpec spec = catalog_domain(name);
    for (const BoundaryPoint& P : sample_boundary_points(spec, 25, 13)) {
      FormReport rep = classify_point(spec, P);
      if (rep.convex) CHECK(rep.levi_pseudoconvex);
    }
  }
}

TEST_CASE("flags are invariant under frame re-choice") {
  DomainSpec ball = catalog_domain("ball");
  std::mt19937_64 rng(23);
  for (const BoundaryPoint& P : sample_boundary_points(ball, 10, 21)) {
    FormReport base = classify_point(ball, P);
    TangentFrame f = tangent_frame(ball, P);
    // rotate the bases by random orthogonal/unitary matrices
    TangentFrame g = f;
    g.real_basis = f.real_basis * random_orthogonal(3, rng);
    g.complex_basis = f.complex_basis * random_unitary(1, rng);
    Eigen::MatrixXd H = hessian_form(ball, P, g);
    Eigen::MatrixXcd L = levi_form(ball, P, g);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(H);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ls(L);
    CHECK(hs.eigenvalues().minCoeff() ==
          doctest::Approx(base.hessian_eigenvalues.front()).epsilon(1e-9));
    CHECK(ls.eigenvalues().minCoeff() ==
          doctest::Approx(base.levi_eigenvalues.front()).epsilon(1e-9));
  }
}

TEST_CASE("flags are invariant under positive defining-function factors") {
  DomainSpec m1 = catalog_domain("model_type_2k", {{"k", 1}});
  Expr factor = add(constant(1.0), mul(constant(0.3), ipow(variable(0), 2)));
  DomainSpec scaled = m1.with_rho(mul(m1.rho(), factor), "model_scaled");
  for (const BoundaryPoint& P : sample_boundary_points(m1, 12, 37)) {
    FormReport a = classify_point(m1, P);
    FormReport b = classify_point(scaled, make_boundary_point(scaled, P.coords));
    CHECK(a.convex == b.convex);
    CHECK(a.strictly_convex == b.strictly_convex);
    CHECK(a.levi_pseudoconvex == b.levi_pseudoconvex);
    CHECK(a.strictly_pseudoconvex == b.strictly_pseudoconvex);
  }
}

TEST_CASE("hartogs: pseudoconvex domains show no violations") {
  DomainSpec ball = catalog_domain("ball");
  HartogsConfig cfg;
  cfg.samples = 800;
  cfg.lines = 2;
  cfg.seed = 4;
  HartogsReport rep = hartogs_check(ball, cfg);
  CHECK(rep.violations == 0);
  CHECK(rep.centers > 700);

  DomainSpec annulus = catalog_domain("annulus_times_disc");
  cfg.samples = 1500;
  HartogsReport rep2 = hartogs_check(annulus, cfg);
  CHECK(rep2.violations == 0);
}

TEST_CASE("hartogs: the union domain is falsified") {
  DomainSpec dom = catalog_domain("example2_nonpseudoconvex");
  HartogsConfig cfg;
  cfg.samples = 20000;
  cfg.lines = 4;
  cfg.seed = 1;
  HartogsReport rep = hartogs_check(dom, cfg);
  CHECK(rep.violations > 0);
  CHECK(rep.worst_defect > 0.0);
  REQUIRE_FALSE(rep.witnesses.empty());
  // witnesses must be genuine interior centers
  for (const auto& w : rep.witnesses) CHECK(dom.member(w.center));
}

} // TEST_SUITE
