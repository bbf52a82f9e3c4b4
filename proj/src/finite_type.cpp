#include "levilab/finite_type.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include <Eigen/Dense>

#include "levilab/jets.hpp"

namespace levilab {

namespace {

struct ExprKey {
  Expr e;
  bool operator==(const ExprKey& o) const { return struct_equal(e, o.e); }
};
struct ExprKeyHash {
  std::size_t operator()(const ExprKey& k) const { return k.e->hash; }
};

// interner shared across a whole bracket enumeration so coefficient DAGs
// share structurally equal subtrees
struct Interner {
  std::unordered_map<ExprKey, Expr, ExprKeyHash> table;
  std::unordered_map<const ExprNode*, Expr> memo;

  Expr intern(const Expr& n) {
    auto hit = memo.find(n.get());
    if (hit != memo.end()) return hit->second;
    Expr rebuilt;
    switch (n->kind) {
      case ExprKind::constant:
      case ExprKind::variable: rebuilt = n; break;
      case ExprKind::ipow: rebuilt = ipow(intern(n->a), n->power); break;
      case ExprKind::exp_fn: rebuilt = exp_of(intern(n->a)); break;
      case ExprKind::log_fn: rebuilt = log_of(intern(n->a)); break;
      case ExprKind::sqrt_fn: rebuilt = sqrt_of(intern(n->a)); break;
      case ExprKind::add: rebuilt = add(intern(n->a), intern(n->b)); break;
      case ExprKind::sub: rebuilt = sub(intern(n->a), intern(n->b)); break;
      case ExprKind::mul: rebuilt = mul(intern(n->a), intern(n->b)); break;
      case ExprKind::div: rebuilt = div(intern(n->a), intern(n->b)); break;
    }
    auto [pos, inserted] = table.emplace(ExprKey{rebuilt}, rebuilt);
    memo.emplace(n.get(), pos->second);
    return pos->second;
  }

  CExpr intern(const CExpr& c) { return {intern(c.re), intern(c.im)}; }
};

std::size_t dag_count_many(const std::vector<const ExprNode*>& roots) {
  std::unordered_set<const ExprNode*> seen;
  std::function<void(const ExprNode*)> walk = [&](const ExprNode* n) {
    if (!n || seen.count(n)) return;
    seen.insert(n);
    walk(n->a.get());
    walk(n->b.get());
  };
  for (const ExprNode* r : roots) walk(r);
  return seen.size();
}

} // namespace

std::size_t VectorField::node_count() const {
  std::vector<const ExprNode*> roots;
  for (const CExpr& c : holo) {
    roots.push_back(c.re.get());
    roots.push_back(c.im.get());
  }
  for (const CExpr& c : anti) {
    roots.push_back(c.re.get());
    roots.push_back(c.im.get());
  }
  return dag_count_many(roots);
}

std::vector<VectorField> tangent_fields(const DomainSpec& spec, const BoundaryPoint& P) {
  int n = spec.n();
  const std::vector<CExpr>& wg = spec.wirtinger_grad_exprs();
  Eigen::VectorXcd rz = spec.wirtinger_grad_at(P.coords);
  if (rz.norm() < spec.grad_floor())
    raise(ErrorKind::degenerate_gradient, spec.name() + ": degenerate gradient for tangent fields");

  CExpr zero{constant(0.0), constant(0.0)};
  std::vector<VectorField> fields;
  for (int j = 0; j < n - 1; ++j) {
    VectorField L;
    L.order = 1;
    L.label = n == 2 ? "L" : "L" + std::to_string(j + 1);
    L.holo.assign(static_cast<std::size_t>(n), zero);
    L.anti.assign(static_cast<std::size_t>(n), zero);
    // L_j = rho_{z_n} d/dz_j - rho_{z_j} d/dz_n
    L.holo[static_cast<std::size_t>(j)] = wg[static_cast<std::size_t>(n - 1)];
    L.holo[static_cast<std::size_t>(n - 1)] = {sub(constant(0.0), wg[static_cast<std::size_t>(j)].re),
                                               sub(constant(0.0), wg[static_cast<std::size_t>(j)].im)};
    fields.push_back(std::move(L));
  }

  // linear independence at P: the coefficient matrix evaluated at P must
  // have full rank; for these fields that is |grad| > 0 plus, for n > 2,
  // rho_{z_n}(P) away from zero
  if (n > 2) {
    std::complex<double> rzn = rz[n - 1];
    if (std::abs(rzn) < spec.grad_floor())
      raise(ErrorKind::degenerate_gradient,
            spec.name() + ": rho_{z_n}(P) ~ 0; normalize coordinates before building fields");
  }
  return fields;
}

VectorField conjugate_field(const VectorField& f) {
  VectorField g;
  g.order = f.order;
  g.label = f.label + "b";
  for (const CExpr& c : f.anti) g.holo.push_back(conj(c));
  for (const CExpr& c : f.holo) g.anti.push_back(conj(c));
  return g;
}

namespace {

VectorField bracket_interned(const VectorField& F, const VectorField& G, Interner& interner) {
  std::size_t n = F.holo.size();
  CExpr zero{constant(0.0), constant(0.0)};
  VectorField R;
  R.order = F.order + G.order;
  R.label = "[" + F.label + "," + G.label + "]";
  R.holo.assign(n, zero);
  R.anti.assign(n, zero);
  for (std::size_t k = 0; k < n; ++k) {
    CExpr h = zero, a = zero;
    for (std::size_t j = 0; j < n; ++j) {
      int jj = static_cast<int>(j);
      h = cadd(h, cmul(F.holo[j], wirtinger(G.holo[k], jj, false)));
      h = cadd(h, cmul(F.anti[j], wirtinger(G.holo[k], jj, true)));
      h = csub(h, cmul(G.holo[j], wirtinger(F.holo[k], jj, false)));
      h = csub(h, cmul(G.anti[j], wirtinger(F.holo[k], jj, true)));
      a = cadd(a, cmul(F.holo[j], wirtinger(G.anti[k], jj, false)));
      a = cadd(a, cmul(F.anti[j], wirtinger(G.anti[k], jj, true)));
      a = csub(a, cmul(G.holo[j], wirtinger(F.anti[k], jj, false)));
      a = csub(a, cmul(G.anti[j], wirtinger(F.anti[k], jj, true)));
    }
    R.holo[k] = interner.intern(h);
    R.anti[k] = interner.intern(a);
  }
  return R;
}

} // namespace

VectorField bracket(const VectorField& F, const VectorField& G) {
  Interner interner;
  return bracket_interned(F, G, interner);
}

std::complex<double> pairing_with_drho(const DomainSpec& spec, const VectorField& N,
                                       const BoundaryPoint& P,
                                       const std::vector<std::vector<double>>& probe_dirs) {
  Eigen::VectorXcd rz = spec.wirtinger_grad_at(P.coords);
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < N.holo.size(); ++j)
    acc += eval_limit(N.holo[j], P.coords, probe_dirs) * rz[static_cast<int>(j)];
  return acc;
}

// --- contact order --------------------------------------------------------------------

ContactOrder contact_order(const DomainSpec& spec, const AnalyticDisc& disc, int M,
                           double coeff_tol) {
  if (!disc.nonsingular_at0())
    raise(ErrorKind::singular_disc, "disc is singular at 0 (psi'(0) = 0)");
  std::vector<double> p0 = disc.eval_real(0.0);
  if (!spec.on_boundary(p0, 1e-6))
    raise(ErrorKind::usage_error, "disc center is not on the boundary");

  int n = spec.n();
  std::vector<Poly2> coords(static_cast<std::size_t>(2 * n));
  for (int j = 0; j < n; ++j) {
    std::vector<std::complex<double>> column;
    for (const auto& level : disc.coeffs) column.push_back(level[static_cast<std::size_t>(j)]);
    complex_poly_coords(column, M, coords[static_cast<std::size_t>(2 * j)],
                        coords[static_cast<std::size_t>(2 * j + 1)]);
  }
  BiJet bj = disc_jet(spec.rho(), coords, M);
  int v = bj.vanishing_order(coeff_tol);
  ContactOrder out;
  if (v == 0) v = 1; // the constant term is boundary residual, not contact data
  if (v > M) {
    out.order = M;
    out.saturated = true;
  } else {
    out.order = v;
  }
  return out;
}

// --- geometric type ---------------------------------------------------------------------

namespace {

struct DiscParams {
  int n, d;
  // tangential components: tau*zeta + sum_{l=2..d} a_l zeta^l  (a_l in C^{n-1})
  // normal component:      sum_{l=1..d} b_l zeta^l
  Eigen::VectorXcd tau; // n-1
  std::vector<Eigen::VectorXcd> a; // index l-2, each n-1
  std::vector<std::complex<double>> b; // index l-1

  static DiscParams zero(int n, int d, const Eigen::VectorXcd& tau) {
    DiscParams p;
    p.n = n;
    p.d = d;
    p.tau = tau;
    p.a.assign(static_cast<std::size_t>(std::max(0, d - 1)), Eigen::VectorXcd::Zero(n - 1));
    p.b.assign(static_cast<std::size_t>(d), 0.0);
    return p;
  }

  int real_count() const { return 2 * (n - 1) * (d - 1) + 2 * d; }

  void pack(Eigen::VectorXd& out) const {
    out.resize(real_count());
    int idx = 0;
    for (const auto& al : a)
      for (int c = 0; c < n - 1; ++c) {
        out[idx++] = al[c].real();
        out[idx++] = al[c].imag();
      }
    for (const auto& bl : b) {
      out[idx++] = bl.real();
      out[idx++] = bl.imag();
    }
  }

  void unpack(const Eigen::VectorXd& in) {
    int idx = 0;
    for (auto& al : a)
      for (int c = 0; c < n - 1; ++c) {
        al[c] = {in[idx], in[idx + 1]};
        idx += 2;
      }
    for (auto& bl : b) {
      bl = {in[idx], in[idx + 1]};
      idx += 2;
    }
  }

  AnalyticDisc disc() const {
    AnalyticDisc out;
    out.coeffs.assign(static_cast<std::size_t>(d) + 1,
                      std::vector<std::complex<double>>(static_cast<std::size_t>(n), 0.0));
    for (int c = 0; c < n - 1; ++c) out.coeffs[1][static_cast<std::size_t>(c)] = tau[c];
    for (int l = 2; l <= d; ++l)
      for (int c = 0; c < n - 1; ++c)
        out.coeffs[static_cast<std::size_t>(l)][static_cast<std::size_t>(c)] =
            a[static_cast<std::size_t>(l - 2)][c];
    for (int l = 1; l <= d; ++l)
      out.coeffs[static_cast<std::size_t>(l)][static_cast<std::size_t>(n - 1)] =
          b[static_cast<std::size_t>(l - 1)];
    return out;
  }
};

// complex jet coefficients of rho o phi with total degree 1..m (p >= q)
Eigen::VectorXd jet_residual(const Expr& rho, const DiscParams& p, int m, double* scale_out) {
  AnalyticDisc d = p.disc();
  std::vector<Poly2> coords(static_cast<std::size_t>(2 * p.n));
  for (int j = 0; j < p.n; ++j) {
    std::vector<std::complex<double>> column;
    for (const auto& level : d.coeffs) column.push_back(level[static_cast<std::size_t>(j)]);
    complex_poly_coords(column, m, coords[static_cast<std::size_t>(2 * j)],
                        coords[static_cast<std::size_t>(2 * j + 1)]);
  }
  BiJet bj = disc_jet(rho, coords, m);
  if (scale_out) *scale_out = 1.0 + bj.poly.max_abs();
  std::vector<double> vals;
  for (int deg = 1; deg <= m; ++deg) {
    for (int q = 0; 2 * q <= deg; ++q) {
      int pp = deg - q;
      if (pp < q) continue;
      std::complex<double> c = bj.bidegree(pp, q);
      vals.push_back(c.real());
      vals.push_back(c.imag());
    }
  }
  Eigen::VectorXd r(static_cast<int>(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) r[static_cast<int>(i)] = vals[i];
  return r;
}

// Gauss-Newton zeroing of the jet residual at stage m; returns true when the
// residual reaches the tolerance
bool solve_stage(const Expr& rho, DiscParams& p, int m, double tol_rel, double* final_residual,
                 double* final_scale) {
  Eigen::VectorXd theta;
  p.pack(theta);
  double scale = 1.0;
  Eigen::VectorXd r = jet_residual(rho, p, m, &scale);
  double best = r.norm();
  for (int it = 0; it < 40; ++it) {
    if (best <= tol_rel * scale) break;
    int nr = static_cast<int>(r.size());
    int np = static_cast<int>(theta.size());
    Eigen::MatrixXd J(nr, np);
    DiscParams pt = p;
    for (int c = 0; c < np; ++c) {
      double h = 1e-6 * (1.0 + std::abs(theta[c]));
      Eigen::VectorXd tp = theta;
      tp[c] += h;
      pt.unpack(tp);
      Eigen::VectorXd rp = jet_residual(rho, pt, m, nullptr);
      J.col(c) = (rp - r) / h;
    }
    Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    double gamma = 1.0;
    bool improved = false;
    for (int ls = 0; ls < 12; ++ls) {
      Eigen::VectorXd cand = theta + gamma * step;
      pt.unpack(cand);
      Eigen::VectorXd rc = jet_residual(rho, pt, m, nullptr);
      if (rc.norm() < best * (1.0 - 1e-4 * gamma)) {
        theta = cand;
        r = rc;
        best = rc.norm();
        improved = true;
        break;
      }
      gamma *= 0.5;
    }
    if (!improved) break;
  }
  p.unpack(theta);
  if (final_residual) *final_residual = best;
  if (final_scale) *final_scale = scale;
  return best <= tol_rel * scale;
}

std::vector<Eigen::VectorXcd> tangential_direction_grid(int n, std::uint64_t seed) {
  std::vector<Eigen::VectorXcd> grid;
  if (n == 2) {
    // a unit tangential direction is unique up to zeta-rotation
    grid.push_back(Eigen::VectorXcd::Ones(1));
    return grid;
  }
  for (int c = 0; c < n - 1; ++c) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n - 1);
    e[c] = 1.0;
    grid.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 8; ++t) {
    Eigen::VectorXcd v(n - 1);
    for (int c = 0; c < n - 1; ++c) v[c] = std::complex<double>(gauss(rng), gauss(rng));
    if (v.norm() < 1e-9) continue;
    grid.push_back(v / v.norm());
  }
  return grid;
}

} // namespace

GeometricTypeResult geometric_type(const DomainSpec& spec, const BoundaryPoint& P,
                                   int degree_budget, int M) {
  if (degree_budget < 1 || M < 2) raise(ErrorKind::usage_error, "need degree >= 1 and cutoff >= 2");
  NormalizedFrame frame = normalize_coordinates(spec, P);
  const Expr& rho_n = frame.transformed.rho();
  int n = spec.n();
  const double tol_rel = 1e-9;

  GeometricTypeResult best;
  best.cutoff = M;
  best.degree_budget = degree_budget;

  for (const Eigen::VectorXcd& tau : tangential_direction_grid(n, 0x7a75u)) {
    DiscParams params = DiscParams::zero(n, degree_budget, tau);
    int order = 0;
    bool saturated = false;
    bool budget = false;
    for (int m = 1; m <= M - 1; ++m) {
      double resid = 0.0, scale = 1.0;
      bool ok = solve_stage(rho_n, params, m, tol_rel, &resid, &scale);
      if (!ok) {
        // confirm the obstruction from fresh starts before accepting it
        bool resolved = false;
        std::mt19937_64 rng(item_seed(0x67656fu, static_cast<std::uint64_t>(m)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int restart = 0; restart < 2 && !resolved; ++restart) {
          DiscParams fresh = DiscParams::zero(n, degree_budget, tau);
          Eigen::VectorXd t0;
          fresh.pack(t0);
          for (int c = 0; c < t0.size(); ++c) t0[c] = 0.1 * gauss(rng);
          fresh.unpack(t0);
          if (solve_stage(rho_n, fresh, m, tol_rel, nullptr, nullptr)) {
            params = fresh;
            resolved = true;
          }
        }
        if (!resolved) {
          order = m;
          if (resid < 1e-5 * scale) budget = true; // stall in the ambiguous band
          break;
        }
      }
      if (m == M - 1) {
        order = M;
        saturated = true;
      }
    }

    if (order > best.order || (order == best.order && saturated && !best.saturated)) {
      best.order = order;
      best.saturated = saturated;
      best.budget_exhausted = budget;
      // map the witness back to the original coordinates
      AnalyticDisc w = params.disc();
      AnalyticDisc original;
      original.coeffs.assign(w.coeffs.size(),
                             std::vector<std::complex<double>>(static_cast<std::size_t>(n), 0.0));
      for (int j = 0; j < n; ++j)
        original.coeffs[0][static_cast<std::size_t>(j)] =
            std::complex<double>(P.coords[static_cast<std::size_t>(2 * j)],
                                 P.coords[static_cast<std::size_t>(2 * j + 1)]);
      for (std::size_t k = 1; k < w.coeffs.size(); ++k) {
        auto mapped = frame.vector_from_normalized(w.coeffs[k]);
        for (int j = 0; j < n; ++j)
          original.coeffs[k][static_cast<std::size_t>(j)] += mapped[static_cast<std::size_t>(j)];
      }
      best.witness = original;
      std::vector<std::complex<double>> tau_full(static_cast<std::size_t>(n), 0.0);
      for (int c = 0; c < n - 1; ++c) tau_full[static_cast<std::size_t>(c)] = tau[c];
      auto tau_orig = frame.vector_from_normalized(tau_full);
      double tn = 0.0;
      for (const auto& c : tau_orig) tn += std::norm(c);
      tn = std::sqrt(tn);
      if (tn > 0)
        for (auto& c : tau_orig) c /= tn;
      best.tau = tau_orig;
    }
  }
  return best;
}

// --- commutator type ---------------------------------------------------------------------

CommutatorTypeResult commutator_type(const DomainSpec& spec, const BoundaryPoint& P, int M,
                                     std::size_t node_budget) {
  CommutatorTypeResult res;
  res.cutoff = M;

  const DomainSpec* work_spec = &spec;
  BoundaryPoint work_P = P;
  DomainSpec normalized_storage;
  NormalizedFrame frame;
  if (spec.n() > 2) {
    frame = normalize_coordinates(spec, P);
    normalized_storage = frame.transformed;
    work_spec = &normalized_storage;
    work_P.coords.assign(static_cast<std::size_t>(spec.real_dim()), 0.0);
    work_P = make_boundary_point(normalized_storage, work_P.coords);
    res.frame_dependent_note = true;
  }

  Eigen::VectorXcd rz = work_spec->wirtinger_grad_at(work_P.coords);
  double grad_scale = 1.0 + rz.norm();

  Interner interner;
  std::vector<VectorField> gens;
  for (VectorField& f : tangent_fields(*work_spec, work_P)) {
    for (CExpr& c : f.holo) c = interner.intern(c);
    for (CExpr& c : f.anti) c = interner.intern(c);
    gens.push_back(f);
    gens.push_back(conjugate_field(gens.back()));
  }

  auto field_key = [](const VectorField& f) {
    std::size_t h = 0x811c9dc5u;
    auto mix = [&h](std::size_t v) { h = (h ^ v) * 0x100000001b3ULL; };
    for (const CExpr& c : f.holo) {
      mix(c.re->hash);
      mix(c.im->hash);
    }
    for (const CExpr& c : f.anti) {
      mix(c.re->hash);
      mix(c.im->hash);
    }
    return h;
  };
  auto is_zero_field = [](const VectorField& f) {
    for (const CExpr& c : f.holo)
      if (!is_zero(c)) return false;
    for (const CExpr& c : f.anti)
      if (!is_zero(c)) return false;
    return true;
  };

  auto pairing_abs = [&](const VectorField& N, double* coeff_scale) {
    std::complex<double> acc = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < N.holo.size(); ++j) {
      std::complex<double> cj = eval_limit(N.holo[j], work_P.coords);
      scale = std::max(scale, std::abs(cj));
      acc += cj * rz[static_cast<int>(j)];
    }
    if (coeff_scale) *coeff_scale = scale;
    return std::abs(acc);
  };

  res.max_pairing_by_order.assign(static_cast<std::size_t>(M) + 1, 0.0);

  // order 1: the generators pair to zero identically (tangency)
  std::vector<VectorField> level = gens;
  std::unordered_set<std::size_t> seen;
  for (const VectorField& f : level) seen.insert(field_key(f));
  for (const VectorField& f : level) {
    double cs = 0.0;
    double pv = pairing_abs(f, &cs);
    res.max_pairing_by_order[1] = std::max(res.max_pairing_by_order[1], pv);
  }

  std::size_t total_nodes = 0;
  for (int target = 2; target <= M; ++target) {
    std::vector<VectorField> next;
    for (const VectorField& f : level) {
      std::size_t gi = 0;
      for (const VectorField& g : gens) {
        // at the seeding level enumerate unordered pairs only
        if (target == 2) {
          std::size_t fi = static_cast<std::size_t>(&f - level.data());
          if (gi < fi) {
            ++gi;
            continue;
          }
        }
        ++gi;
        VectorField nb = bracket_interned(f, g, interner);
        if (is_zero_field(nb)) continue;
        std::size_t key = field_key(nb);
        if (seen.count(key)) continue;
        seen.insert(key);
        total_nodes += nb.node_count();
        next.push_back(std::move(nb));
      }
    }
    if (next.empty()) {
      // every commutator of this order collapsed to zero; nothing can pair
      res.order = M;
      res.saturated = true;
      return res;
    }

    double threshold = 1e-8 * grad_scale;
    double level_max = 0.0;
    const VectorField* witness = nullptr;
    double witness_val = 0.0;
    for (const VectorField& f : next) {
      double cs = 0.0;
      double pv = pairing_abs(f, &cs);
      double local_threshold = 1e-8 * (1.0 + cs) * grad_scale;
      level_max = std::max(level_max, pv);
      if (pv > local_threshold && (witness == nullptr || pv > witness_val)) {
        witness = &f;
        witness_val = pv;
        res.threshold = local_threshold;
      }
    }
    res.max_pairing_by_order[static_cast<std::size_t>(target)] = level_max;
    if (witness) {
      res.order = target;
      res.witness_label = witness->label;
      res.pairing_abs = witness_val;
      return res;
    }

    if (total_nodes > node_budget) {
      res.order = target;
      res.blowup = true;
      return res;
    }
    level = std::move(next);
  }
  res.order = M;
  res.saturated = true;
  return res;
}

TypeReport bloom_graham_check(const DomainSpec& spec, const BoundaryPoint& P, int degree_budget,
                              int M) {
  TypeReport rep;
  rep.P = P;
  rep.cutoff = M;
  rep.geometric = geometric_type(spec, P, degree_budget, M);
  rep.commutator = commutator_type(spec, P, M);
  bool both_saturated = rep.geometric.saturated && rep.commutator.saturated;
  bool both_found = !rep.geometric.saturated && !rep.commutator.saturated &&
                    !rep.commutator.blowup;
  rep.agree = both_saturated || (both_found && rep.geometric.order == rep.commutator.order);
  rep.experimental = spec.n() > 2;
  return rep;
}

} // namespace levilab
