#include "levilab/domain.hpp"

#include <cmath>
#include <random>

#include "levilab/jets.hpp"

namespace levilab {

bool Box::contains(std::span<const double> x) const {
  if (x.size() != ranges.size()) return false;
  for (std::size_t i = 0; i < ranges.size(); ++i)
    if (x[i] < ranges[i][0] || x[i] > ranges[i][1]) return false;
  return true;
}

double Box::max_extent() const {
  double m = 0.0;
  for (const auto& r : ranges) m = std::max(m, r[1] - r[0]);
  return m;
}

Box Box::cube(int dim, double half_width) {
  Box b;
  b.ranges.assign(static_cast<std::size_t>(dim), {-half_width, half_width});
  return b;
}

struct DomainSpec::Impl {
  std::string name;
  int n = 0;
  bool smooth = false;
  Box box;
  double tol_boundary = 1e-9;
  double grad_floor = 1e-6;

  // smooth path
  Expr rho;
  std::vector<Expr> grad;
  std::vector<CExpr> wgrad;
  Program prog; // outputs: rho, then grad components

  // membership path
  MemberFn member;
  SignedDistFn signed_dist;
};

DomainSpec DomainSpec::smooth_domain(std::string name, int n, Expr rho, Box box,
                                     double tol_boundary) {
  if (max_var_index(rho) >= 2 * n)
    raise(ErrorKind::usage_error, "defining function uses variables beyond x" + std::to_string(2 * n));
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->n = n;
  impl->smooth = true;
  impl->box = std::move(box);
  impl->tol_boundary = tol_boundary;
  impl->rho = rho;
  std::vector<Expr> roots;
  roots.push_back(rho);
  for (int i = 0; i < 2 * n; ++i) {
    impl->grad.push_back(diff(rho, i));
    roots.push_back(impl->grad.back());
  }
  for (int j = 0; j < n; ++j) impl->wgrad.push_back(wirtinger(rho, j, false));
  impl->prog = Program::compile(roots);
  DomainSpec spec;
  spec.impl_ = std::move(impl);
  return spec;
}

DomainSpec DomainSpec::membership_domain(std::string name, int n, Box box,
                                         MemberFn member, SignedDistFn signed_dist) {
  auto impl = std::make_shared<Impl>();
  impl->name = std::move(name);
  impl->n = n;
  impl->smooth = false;
  impl->box = std::move(box);
  impl->member = std::move(member);
  impl->signed_dist = std::move(signed_dist);
  DomainSpec spec;
  spec.impl_ = std::move(impl);
  return spec;
}

const std::string& DomainSpec::name() const { return impl_->name; }
int DomainSpec::n() const { return impl_->n; }
int DomainSpec::real_dim() const { return 2 * impl_->n; }
bool DomainSpec::smooth() const { return impl_->smooth; }
const Box& DomainSpec::bounding_box() const { return impl_->box; }
double DomainSpec::tol_boundary() const { return impl_->tol_boundary; }
double DomainSpec::grad_floor() const { return impl_->grad_floor; }

const Expr& DomainSpec::rho() const {
  if (!impl_->smooth)
    raise(ErrorKind::not_smooth, impl_->name + " is membership-only (no defining function)");
  return impl_->rho;
}

const std::vector<Expr>& DomainSpec::grad_exprs() const {
  rho(); // smoothness check
  return impl_->grad;
}

const std::vector<CExpr>& DomainSpec::wirtinger_grad_exprs() const {
  rho();
  return impl_->wgrad;
}

namespace {

thread_local std::vector<double> g_prog_out;

} // namespace

double DomainSpec::rho_at(std::span<const double> x) const {
  rho();
  g_prog_out.resize(static_cast<std::size_t>(impl_->prog.num_outputs()));
  if (impl_->prog.eval(x, g_prog_out)) return g_prog_out[0];
  return eval_limit(impl_->rho, x);
}

Eigen::VectorXd DomainSpec::grad_at(std::span<const double> x) const {
  rho();
  int d = real_dim();
  Eigen::VectorXd g(d);
  g_prog_out.resize(static_cast<std::size_t>(impl_->prog.num_outputs()));
  if (impl_->prog.eval(x, g_prog_out)) {
    for (int i = 0; i < d; ++i) g[i] = g_prog_out[static_cast<std::size_t>(i + 1)];
    return g;
  }
  for (int i = 0; i < d; ++i) g[i] = eval_limit(impl_->grad[static_cast<std::size_t>(i)], x);
  return g;
}

Eigen::VectorXcd DomainSpec::wirtinger_grad_at(std::span<const double> x) const {
  Eigen::VectorXd g = grad_at(x);
  Eigen::VectorXcd w(n());
  for (int j = 0; j < n(); ++j)
    w[j] = 0.5 * std::complex<double>(g[2 * j], -g[2 * j + 1]);
  return w;
}

bool DomainSpec::member(std::span<const double> x) const {
  if (!impl_->smooth) return impl_->member(x);
  return rho_at(x) < 0.0;
}

bool DomainSpec::in_closure(std::span<const double> x, double tol_scale) const {
  if (!impl_->smooth) {
    double sd = impl_->signed_dist(x);
    return sd >= -tol_scale;
  }
  double r = rho_at(x);
  if (r < 0.0) return true;
  double gn = grad_at(x).norm();
  return r <= tol_scale * (1.0 + gn);
}

bool DomainSpec::on_boundary(std::span<const double> x, double tol_scale) const {
  if (!impl_->smooth) return std::abs(impl_->signed_dist(x)) <= tol_scale;
  double r = std::abs(rho_at(x));
  double gn = grad_at(x).norm();
  return r <= tol_scale * (1.0 + gn);
}

double DomainSpec::boundary_distance(std::span<const double> x) const {
  if (!impl_->smooth) return std::abs(impl_->signed_dist(x));
  BoundaryPoint bp;
  bool projected = false;
  try {
    bp = boundary_project(*this, x);
    projected = true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::degenerate_gradient) throw;
  }
  if (!projected) {
    // grad rho vanishes at x (e.g. the center of the ball); restart the
    // projection from slightly offset points, the refinement below still
    // descends to the nearest foot
    double h = 1e-3 * (1.0 + impl_->box.max_extent());
    for (std::size_t i = 0; i < x.size() && !projected; ++i) {
      std::vector<double> start(x.begin(), x.end());
      start[i] += h;
      try {
        bp = boundary_project(*this, start);
        projected = true;
      } catch (const Error&) {
      }
    }
    if (!projected)
      raise(ErrorKind::no_convergence, impl_->name + ": distance query found no usable gradient");
  }
  Eigen::Map<const Eigen::VectorXd> xv(x.data(), static_cast<int>(x.size()));
  Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(bp.coords.data(),
                                                        static_cast<int>(bp.coords.size()));
  double best = (xv - q).norm();
  // closest-point refinement: slide q along the boundary toward the foot of x
  for (int it = 0; it < 40; ++it) {
    Eigen::VectorXd g = grad_at(std::span<const double>(q.data(), static_cast<std::size_t>(q.size())));
    double gn = g.norm();
    if (gn < grad_floor()) break;
    Eigen::VectorXd nrm = g / gn;
    Eigen::VectorXd v = xv - q;
    Eigen::VectorXd vt = v - v.dot(nrm) * nrm;
    if (vt.norm() <= 1e-11 * (1.0 + v.norm())) break;
    double gamma = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      Eigen::VectorXd trial = q + gamma * vt;
      try {
        BoundaryPoint tp = boundary_project(
            *this, std::span<const double>(trial.data(), static_cast<std::size_t>(trial.size())));
        Eigen::VectorXd tq = Eigen::Map<const Eigen::VectorXd>(tp.coords.data(),
                                                               static_cast<int>(tp.coords.size()));
        double d = (xv - tq).norm();
        if (d < best - 1e-15) {
          q = tq;
          best = d;
          improved = true;
          break;
        }
      } catch (const Error&) {
        // retreat and retry
      }
      gamma *= 0.5;
    }
    if (!improved) break;
  }
  return best;
}

DomainSpec DomainSpec::with_rho(Expr new_rho, std::string new_name) const {
  return smooth_domain(std::move(new_name), impl_->n, std::move(new_rho), impl_->box,
                       impl_->tol_boundary);
}

// --- projection / distance -------------------------------------------------------

BoundaryPoint boundary_project(const DomainSpec& spec, std::span<const double> x,
                               int max_iter) {
  if (!spec.smooth())
    raise(ErrorKind::not_smooth, spec.name() + ": boundary projection needs a defining function");
  std::vector<double> q(x.begin(), x.end());
  double r = 0.0, gn = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    r = spec.rho_at(q);
    Eigen::VectorXd g = spec.grad_at(q);
    gn = g.norm();
    if (gn < spec.grad_floor())
      raise(ErrorKind::degenerate_gradient,
            spec.name() + ": |grad rho| = " + std::to_string(gn) + " below floor during projection");
    if (std::abs(r) <= spec.tol_boundary()) {
      BoundaryPoint P;
      P.coords = q;
      P.residual = std::abs(r);
      P.grad_norm = gn;
      return P;
    }
    double step = -r / (gn * gn);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += step * g[static_cast<int>(i)];
  }
  raise(ErrorKind::no_convergence,
        spec.name() + ": boundary projection stalled at |rho| = " + std::to_string(std::abs(r)));
}

Eigen::VectorXd outward_normal(const DomainSpec& spec, const BoundaryPoint& P) {
  Eigen::VectorXd g = spec.grad_at(P.coords);
  double gn = g.norm();
  if (gn < spec.grad_floor())
    raise(ErrorKind::degenerate_gradient, spec.name() + ": degenerate gradient at boundary point");
  return g / gn;
}

double boundary_distance(const DomainSpec& spec, std::span<const double> x) {
  return spec.boundary_distance(x);
}

BoundaryPoint make_boundary_point(const DomainSpec& spec, std::span<const double> x) {
  if (!spec.smooth()) {
    BoundaryPoint P;
    P.coords.assign(x.begin(), x.end());
    return P;
  }
  BoundaryPoint P;
  P.coords.assign(x.begin(), x.end());
  P.residual = std::abs(spec.rho_at(x));
  P.grad_norm = spec.grad_at(x).norm();
  if (P.residual > spec.tol_boundary() * (1.0 + P.grad_norm))
    P = boundary_project(spec, x);
  if (P.grad_norm < spec.grad_floor())
    raise(ErrorKind::degenerate_gradient, spec.name() + ": not a defining function at this point");
  return P;
}

// --- coordinate normalization -------------------------------------------------------

std::vector<double> NormalizedFrame::to_normalized(std::span<const double> z) const {
  int n = static_cast<int>(unitary.rows());
  Eigen::VectorXcd zc(n);
  for (int j = 0; j < n; ++j)
    zc[j] = std::complex<double>(z[2 * j] - base_point[static_cast<std::size_t>(2 * j)],
                                 z[2 * j + 1] - base_point[static_cast<std::size_t>(2 * j + 1)]);
  Eigen::VectorXcd w = scale * (unitary * zc);
  std::vector<double> out(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(2 * j)] = w[j].real();
    out[static_cast<std::size_t>(2 * j + 1)] = w[j].imag();
  }
  return out;
}

std::vector<double> NormalizedFrame::from_normalized(std::span<const double> w) const {
  int n = static_cast<int>(unitary.rows());
  Eigen::VectorXcd wc(n);
  for (int j = 0; j < n; ++j) wc[j] = std::complex<double>(w[2 * j], w[2 * j + 1]);
  Eigen::VectorXcd zc = unitary.adjoint() * (wc / scale);
  std::vector<double> out(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    out[static_cast<std::size_t>(2 * j)] = zc[j].real() + base_point[static_cast<std::size_t>(2 * j)];
    out[static_cast<std::size_t>(2 * j + 1)] =
        zc[j].imag() + base_point[static_cast<std::size_t>(2 * j + 1)];
  }
  return out;
}

std::vector<std::complex<double>> NormalizedFrame::vector_from_normalized(
    std::span<const std::complex<double>> w) const {
  int n = static_cast<int>(unitary.rows());
  Eigen::VectorXcd wc(n);
  for (int j = 0; j < n; ++j) wc[j] = w[static_cast<std::size_t>(j)];
  Eigen::VectorXcd zc = unitary.adjoint() * (wc / scale);
  return {zc.data(), zc.data() + n};
}

NormalizedFrame normalize_coordinates(const DomainSpec& spec, const BoundaryPoint& P) {
  if (!spec.smooth())
    raise(ErrorKind::not_smooth, spec.name() + ": cannot normalize a membership-only domain");
  int n = spec.n();
  Eigen::VectorXcd rz = spec.wirtinger_grad_at(P.coords);
  double nrm = rz.norm();
  if (nrm < spec.grad_floor())
    raise(ErrorKind::degenerate_gradient, spec.name() + ": degenerate gradient at base point");
  Eigen::VectorXcd v = rz.conjugate() / nrm; // complex outward normal direction

  // unitary with rows: orthonormal basis of v-perp, then v* as last row,
  // so U v = e_n exactly
  Eigen::MatrixXcd M(n, n);
  M.col(0) = v;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M.leftCols(1));
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd U(n, n);
  for (int j = 0; j < n - 1; ++j) U.row(j) = Q.col(j + 1).adjoint();
  U.row(n - 1) = v.adjoint();

  double s = nrm;

  // z = P + U^H w / s, written per real coordinate of z
  Eigen::MatrixXcd B = U.adjoint() / s;
  std::vector<Expr> repl(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    Expr re_part = constant(P.coords[static_cast<std::size_t>(2 * j)]);
    Expr im_part = constant(P.coords[static_cast<std::size_t>(2 * j + 1)]);
    for (int k = 0; k < n; ++k) {
      std::complex<double> b = B(j, k);
      // w_k = u + iv with u = x_{2k+1}, v = x_{2k+2}
      re_part = add(re_part, sub(mul(constant(b.real()), variable(2 * k)),
                                 mul(constant(b.imag()), variable(2 * k + 1))));
      im_part = add(im_part, add(mul(constant(b.imag()), variable(2 * k)),
                                 mul(constant(b.real()), variable(2 * k + 1))));
    }
    repl[static_cast<std::size_t>(2 * j)] = re_part;
    repl[static_cast<std::size_t>(2 * j + 1)] = im_part;
  }
  Expr rho_w = compact(substitute(spec.rho(), repl));

  Box wbox = Box::cube(2 * n, s * spec.bounding_box().max_extent());
  NormalizedFrame frame;
  frame.base_point = P.coords;
  frame.unitary = U;
  frame.scale = s;
  frame.transformed =
      DomainSpec::smooth_domain(spec.name() + "@normalized", n, rho_w, wbox, spec.tol_boundary());
  return frame;
}

// --- sampling ------------------------------------------------------------------------

std::vector<BoundaryPoint> sample_boundary_points(const DomainSpec& spec, int count,
                                                  std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Box& box = spec.bounding_box();
  std::vector<BoundaryPoint> out;
  int guard = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++guard > count * 200 + 1000)
      raise(ErrorKind::sampling_error, spec.name() + ": could not sample boundary points");
    std::vector<double> x(box.ranges.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::uniform_real_distribution<double> u(box.ranges[i][0], box.ranges[i][1]);
      x[i] = u(rng);
    }
    try {
      BoundaryPoint P = boundary_project(spec, x);
      if (!box.contains(P.coords)) continue;
      out.push_back(std::move(P));
    } catch (const Error&) {
      continue;
    }
  }
  return out;
}

std::vector<std::vector<double>> sample_interior_points(const DomainSpec& spec, int count,
                                                        std::uint64_t seed,
                                                        long max_rejects_per_point) {
  std::mt19937_64 rng(seed);
  const Box& box = spec.bounding_box();
  std::vector<std::vector<double>> out;
  for (int k = 0; k < count; ++k) {
    long rejects = 0;
    while (true) {
      if (rejects++ > max_rejects_per_point)
        raise(ErrorKind::sampling_error, spec.name() + ": interior sampling kept rejecting");
      std::vector<double> x(box.ranges.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        std::uniform_real_distribution<double> u(box.ranges[i][0], box.ranges[i][1]);
        x[i] = u(rng);
      }
      if (spec.member(x)) {
        out.push_back(std::move(x));
        break;
      }
    }
  }
  return out;
}

} // namespace levilab
