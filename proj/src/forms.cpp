#include "levilab/forms.hpp"

#include <cmath>

#include "levilab/jets.hpp"

namespace levilab {

TangentFrame tangent_frame(const DomainSpec& spec, const BoundaryPoint& P) {
  int d = spec.real_dim();
  int n = spec.n();
  Eigen::VectorXd g = spec.grad_at(P.coords);
  double gn = g.norm();
  if (gn < spec.grad_floor())
    raise(ErrorKind::degenerate_gradient, spec.name() + ": degenerate gradient at frame point");

  TangentFrame frame;
  frame.P = P;

  // real tangent basis: orthonormal complement of grad rho
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd Q = qr.householderQ();
  frame.real_basis = Q.rightCols(d - 1);

  // complex tangent basis: orthonormal complement of conj(rho_z)
  Eigen::VectorXcd rz = spec.wirtinger_grad_at(P.coords);
  Eigen::VectorXcd v = rz.conjugate();
  Eigen::HouseholderQR<Eigen::MatrixXcd> cqr(v);
  Eigen::MatrixXcd Qc = cqr.householderQ();
  frame.complex_basis = Qc.rightCols(n - 1);
  return frame;
}

Eigen::MatrixXd real_hessian(const DomainSpec& spec, const BoundaryPoint& P) {
  int d = spec.real_dim();
  const std::vector<Expr>& grad = spec.grad_exprs();
  Eigen::MatrixXd H(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = i; k < d; ++k) {
      double v = eval_limit(diff(grad[static_cast<std::size_t>(i)], k), P.coords);
      H(i, k) = v;
      H(k, i) = v;
    }
  }
  return H;
}

Eigen::MatrixXcd complex_hessian(const DomainSpec& spec, const BoundaryPoint& P) {
  int n = spec.n();
  const std::vector<CExpr>& wgrad = spec.wirtinger_grad_exprs();
  Eigen::MatrixXcd L(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      CExpr e = wirtinger(wgrad[static_cast<std::size_t>(j)], k, true); // d^2 rho / dz_j dzbar_k
      L(j, k) = eval_limit(e, P.coords);
    }
  }
  return L;
}

Eigen::MatrixXd hessian_form(const DomainSpec& spec, const BoundaryPoint& P,
                             const TangentFrame& frame) {
  Eigen::MatrixXd H = real_hessian(spec, P);
  return frame.real_basis.transpose() * H * frame.real_basis;
}

Eigen::MatrixXcd levi_form(const DomainSpec& spec, const BoundaryPoint& P,
                           const TangentFrame& frame) {
  Eigen::MatrixXcd L = complex_hessian(spec, P);
  // (xi^a)^T Lambda conj(xi^b) over the basis columns
  return frame.complex_basis.transpose() * L * frame.complex_basis.conjugate();
}

FormReport classify_point(const DomainSpec& spec, const BoundaryPoint& P, double tol_eig) {
  TangentFrame frame = tangent_frame(spec, P);
  FormReport rep;
  rep.P = P;
  rep.tol_eig = tol_eig;
  rep.hessian_restricted = hessian_form(spec, P, frame);
  rep.levi_restricted = levi_form(spec, P, frame);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> hs(rep.hessian_restricted);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ls(rep.levi_restricted);
  rep.hessian_eigenvalues.assign(hs.eigenvalues().data(),
                                 hs.eigenvalues().data() + hs.eigenvalues().size());
  rep.levi_eigenvalues.assign(ls.eigenvalues().data(),
                              ls.eigenvalues().data() + ls.eigenvalues().size());

  double hscale = 1.0 + rep.hessian_restricted.cwiseAbs().maxCoeff();
  double lscale = 1.0 + rep.levi_restricted.cwiseAbs().maxCoeff();
  rep.tol_hessian = tol_eig * hscale;
  rep.tol_levi = tol_eig * lscale;

  double hmin = rep.hessian_eigenvalues.empty() ? 0.0 : rep.hessian_eigenvalues.front();
  double lmin = rep.levi_eigenvalues.empty() ? 0.0 : rep.levi_eigenvalues.front();
  rep.convex = hmin >= -rep.tol_hessian;
  rep.strictly_convex = hmin >= rep.tol_hessian;
  rep.levi_pseudoconvex = lmin >= -rep.tol_levi;
  rep.strictly_pseudoconvex = lmin >= rep.tol_levi;
  return rep;
}

} // namespace levilab
