#include "levilab/jets.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <unordered_map>

namespace levilab {

// --- Poly1 -------------------------------------------------------------------

double Poly1::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

int Poly1::lowest_degree(double rel_tol) const {
  double tol = rel_tol * max_abs();
  for (int i = 0; i <= cap(); ++i)
    if (std::abs(c_[static_cast<std::size_t>(i)]) > tol) return i;
  return -1;
}

Poly1 Poly1::lifted(int new_cap) const {
  Poly1 r(new_cap);
  int n = std::min(cap(), new_cap);
  for (int i = 0; i <= n; ++i) r[i] = (*this)[i];
  return r;
}

namespace {
int common_cap(int a, int b) { return std::max(a, b); }
} // namespace

Poly1 add(const Poly1& a, const Poly1& b) {
  Poly1 r(common_cap(a.cap(), b.cap()));
  for (int i = 0; i <= r.cap(); ++i)
    r[i] = (i <= a.cap() ? a[i] : 0.0) + (i <= b.cap() ? b[i] : 0.0);
  return r;
}

Poly1 sub(const Poly1& a, const Poly1& b) {
  Poly1 r(common_cap(a.cap(), b.cap()));
  for (int i = 0; i <= r.cap(); ++i)
    r[i] = (i <= a.cap() ? a[i] : 0.0) - (i <= b.cap() ? b[i] : 0.0);
  return r;
}

Poly1 scale(const Poly1& a, double s) {
  Poly1 r(a.cap());
  for (int i = 0; i <= r.cap(); ++i) r[i] = a[i] * s;
  return r;
}

Poly1 mul(const Poly1& a, const Poly1& b) {
  Poly1 r(common_cap(a.cap(), b.cap()));
  for (int i = 0; i <= std::min(a.cap(), r.cap()); ++i) {
    if (a[i] == 0.0) continue;
    int jmax = std::min(b.cap(), r.cap() - i);
    for (int j = 0; j <= jmax; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

// --- Poly2 -------------------------------------------------------------------

Poly2::Poly2(int cap) : cap_(cap), c_(static_cast<std::size_t>(cap + 1) * (cap + 2) / 2, 0.0) {}

Poly2 Poly2::constant(int cap, double v) {
  Poly2 p(cap);
  p.at(0, 0) = v;
  return p;
}

double Poly2::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

int Poly2::lowest_degree(double rel_tol) const {
  double tol = rel_tol * max_abs();
  for (int d = 0; d <= cap_; ++d)
    for (int j = 0; j <= d; ++j)
      if (std::abs(at(d, j)) > tol) return d;
  return -1;
}

Poly2 Poly2::lifted(int new_cap) const {
  Poly2 r(new_cap);
  int n = std::min(cap_, new_cap);
  for (int d = 0; d <= n; ++d)
    for (int j = 0; j <= d; ++j) r.at(d, j) = at(d, j);
  return r;
}

double Poly2::homogeneous_at(int d, double cos_th, double sin_th) const {
  double v = 0.0;
  for (int j = 0; j <= d; ++j)
    v += at(d, j) * std::pow(cos_th, d - j) * std::pow(sin_th, j);
  return v;
}

Poly2 add(const Poly2& a, const Poly2& b) {
  Poly2 r(common_cap(a.cap(), b.cap()));
  for (int d = 0; d <= r.cap(); ++d)
    for (int j = 0; j <= d; ++j)
      r.at(d, j) = (d <= a.cap() ? a.at(d, j) : 0.0) + (d <= b.cap() ? b.at(d, j) : 0.0);
  return r;
}

Poly2 sub(const Poly2& a, const Poly2& b) {
  Poly2 r(common_cap(a.cap(), b.cap()));
  for (int d = 0; d <= r.cap(); ++d)
    for (int j = 0; j <= d; ++j)
      r.at(d, j) = (d <= a.cap() ? a.at(d, j) : 0.0) - (d <= b.cap() ? b.at(d, j) : 0.0);
  return r;
}

Poly2 scale(const Poly2& a, double s) {
  Poly2 r = a;
  for (int d = 0; d <= r.cap(); ++d)
    for (int j = 0; j <= d; ++j) r.at(d, j) *= s;
  return r;
}

Poly2 mul(const Poly2& a, const Poly2& b) {
  Poly2 r(common_cap(a.cap(), b.cap()));
  for (int da = 0; da <= std::min(a.cap(), r.cap()); ++da)
    for (int ja = 0; ja <= da; ++ja) {
      double av = a.at(da, ja);
      if (av == 0.0) continue;
      int db_max = std::min(b.cap(), r.cap() - da);
      for (int db = 0; db <= db_max; ++db)
        for (int jb = 0; jb <= db; ++jb)
          r.at(da + db, ja + jb) += av * b.at(db, jb);
    }
  return r;
}

// --- generic jet values ---------------------------------------------------------

namespace {

template <class P>
struct PolyOps;

template <>
struct PolyOps<Poly1> {
  static int num_dirs() { return 2; }
  static double lowest_form(const Poly1& p, int deg, int dir) {
    double v = p[deg];
    return (dir == 0 || deg % 2 == 0) ? v : -v;
  }
};

template <>
struct PolyOps<Poly2> {
  static constexpr int kDirs = 256;
  static int num_dirs() { return kDirs; }
  static double lowest_form(const Poly2& p, int deg, int dir) {
    double th = 2.0 * M_PI * dir / kDirs + 0.03; // avoid exact axes
    return p.homogeneous_at(deg, std::cos(th), std::sin(th));
  }
};

template <class P>
struct JetVal {
  enum class Kind { regular, pole, flat } kind = Kind::regular;
  P poly;   // regular
  P num, den; // pole

  static JetVal regular(P p) {
    JetVal v;
    v.kind = Kind::regular;
    v.poly = std::move(p);
    return v;
  }
  static JetVal flat_zero() {
    JetVal v;
    v.kind = Kind::flat;
    return v;
  }
};

constexpr double kPolyZeroTol = 1e-14;

template <class P>
struct JetCtx {
  int cap;      // order carried for regular jets
  int pole_cap; // roomier order for formal quotients
  const std::vector<P>* vars; // per-variable coordinate jets (regular, cap)
  std::unordered_map<const ExprNode*, JetVal<P>> memo;

  P lift_pole(const P& p) const { return p.cap() >= pole_cap ? p : p.lifted(pole_cap); }

  JetVal<P> make_pole(P num, P den) const {
    // den vanishing identically means a genuine division by zero along the
    // curve; den with nonzero constant term means the quotient is regular.
    int dl = den.lowest_degree(kPolyZeroTol);
    if (dl < 0)
      raise(ErrorKind::domain_error, "division by an expression vanishing identically along the curve");
    if (dl == 0) {
      JetVal<P> v;
      v.kind = JetVal<P>::Kind::regular;
      v.poly = series_div(num, den);
      return v;
    }
    if (num.lowest_degree(kPolyZeroTol) < 0) {
      JetVal<P> v;
      v.kind = JetVal<P>::Kind::regular;
      v.poly = P(cap);
      return v;
    }
    JetVal<P> v;
    v.kind = JetVal<P>::Kind::pole;
    v.num = lift_pole(num);
    v.den = lift_pole(den);
    return v;
  }

  P series_div(const P& num, const P& den) const;
};

// small helpers to read/write the constant term uniformly
inline double const_term(const Poly1& p) { return p[0]; }
inline double const_term(const Poly2& p) { return p.at(0, 0); }
inline void set_const_term(Poly1& p, double v) { p[0] = v; }
inline void set_const_term(Poly2& p, double v) { p.at(0, 0) = v; }

template <class P>
P compose_series(const P& p, std::span<const double> taylor) {
  // sum_k taylor[k] u^k with u = p - p(0); Horner from the top
  P u = p;
  set_const_term(u, 0.0);
  int n = static_cast<int>(taylor.size()) - 1;
  P acc = P::constant(p.cap(), taylor[static_cast<std::size_t>(n)]);
  for (int k = n - 1; k >= 0; --k) {
    acc = mul(acc, u);
    set_const_term(acc, const_term(acc) + taylor[static_cast<std::size_t>(k)]);
  }
  return acc;
}

template <class P>
P JetCtx<P>::series_div(const P& num, const P& den) const {
  double d0 = const_term(den);
  int n = std::max(num.cap(), den.cap());
  std::vector<double> taylor(static_cast<std::size_t>(n) + 1);
  double inv = 1.0 / d0;
  double acc = inv;
  for (int k = 0; k <= n; ++k) {
    taylor[static_cast<std::size_t>(k)] = acc;
    acc *= -inv;
  }
  return mul(num.cap() >= den.cap() ? num : num.lifted(den.cap()),
             compose_series(den.cap() >= num.cap() ? den : den.lifted(num.cap()), taylor));
}

template <class P>
JetVal<P> jv_add(const JetCtx<P>& ctx, const JetVal<P>& a, const JetVal<P>& b) {
  using K = typename JetVal<P>::Kind;
  if (a.kind == K::flat) return b;
  if (b.kind == K::flat) return a;
  if (a.kind == K::regular && b.kind == K::regular)
    return JetVal<P>::regular(add(a.poly, b.poly));
  if (a.kind == K::pole && b.kind == K::pole)
    return ctx.make_pole(add(mul(a.num, b.den), mul(b.num, a.den)), mul(a.den, b.den));
  const JetVal<P>& p = a.kind == K::pole ? a : b;
  const JetVal<P>& r = a.kind == K::pole ? b : a;
  return ctx.make_pole(add(p.num, mul(ctx.lift_pole(r.poly), p.den)), p.den);
}

template <class P>
JetVal<P> jv_neg(const JetVal<P>& a) {
  using K = typename JetVal<P>::Kind;
  JetVal<P> r = a;
  if (a.kind == K::regular) r.poly = scale(a.poly, -1.0);
  if (a.kind == K::pole) r.num = scale(a.num, -1.0);
  return r;
}

template <class P>
JetVal<P> jv_sub(const JetCtx<P>& ctx, const JetVal<P>& a, const JetVal<P>& b) {
  return jv_add(ctx, a, jv_neg(b));
}

template <class P>
JetVal<P> jv_mul(const JetCtx<P>& ctx, const JetVal<P>& a, const JetVal<P>& b) {
  using K = typename JetVal<P>::Kind;
  // a flat factor beats any polynomial quotient
  if (a.kind == K::flat || b.kind == K::flat) return JetVal<P>::flat_zero();
  if (a.kind == K::regular && b.kind == K::regular)
    return JetVal<P>::regular(mul(a.poly, b.poly));
  if (a.kind == K::pole && b.kind == K::pole)
    return ctx.make_pole(mul(a.num, b.num), mul(a.den, b.den));
  const JetVal<P>& p = a.kind == K::pole ? a : b;
  const JetVal<P>& r = a.kind == K::pole ? b : a;
  return ctx.make_pole(mul(p.num, ctx.lift_pole(r.poly)), p.den);
}

template <class P>
JetVal<P> jv_div(const JetCtx<P>& ctx, const JetVal<P>& a, const JetVal<P>& b) {
  using K = typename JetVal<P>::Kind;
  if (b.kind == K::flat)
    raise(ErrorKind::domain_error, "division by a flat (infinite-order) zero");
  if (a.kind == K::flat) return JetVal<P>::flat_zero();
  if (b.kind == K::pole) {
    // a / (n/d) = a * d / n
    JetVal<P> inv = ctx.make_pole(b.den, b.num);
    return jv_mul(ctx, a, inv);
  }
  if (a.kind == K::pole) return ctx.make_pole(a.num, mul(a.den, ctx.lift_pole(b.poly)));
  return ctx.make_pole(a.poly, b.poly);
}

template <class P>
JetVal<P> jv_ipow(const JetCtx<P>& ctx, const JetVal<P>& a, int k) {
  using K = typename JetVal<P>::Kind;
  if (k == 0) return JetVal<P>::regular(P::constant(ctx.cap, 1.0));
  if (k < 0) {
    JetVal<P> one = JetVal<P>::regular(P::constant(ctx.cap, 1.0));
    return jv_div(ctx, one, jv_ipow(ctx, a, -k));
  }
  if (a.kind == K::flat) return JetVal<P>::flat_zero();
  JetVal<P> acc = JetVal<P>::regular(P::constant(ctx.cap, 1.0));
  JetVal<P> base = a;
  int e = k;
  while (e > 0) {
    if (e & 1) acc = jv_mul(ctx, acc, base);
    e >>= 1;
    if (e > 0) base = jv_mul(ctx, base, base);
  }
  return acc;
}

// exp of a formal quotient: flat zero when the quotient tends to -infinity
// in every direction where its leading behavior is visible.
template <class P>
JetVal<P> jv_exp_pole(const JetVal<P>& a) {
  int nl = a.num.lowest_degree(kPolyZeroTol);
  int dl = a.den.lowest_degree(kPolyZeroTol);
  if (nl < 0 || dl < 0 || nl >= dl)
    raise(ErrorKind::domain_error, "exp of a quotient with unresolved leading behavior");
  int dirs = PolyOps<P>::num_dirs();
  double scale_n = 0.0, scale_d = 0.0;
  std::vector<double> ln(static_cast<std::size_t>(dirs)), ld(static_cast<std::size_t>(dirs));
  for (int i = 0; i < dirs; ++i) {
    ln[static_cast<std::size_t>(i)] = PolyOps<P>::lowest_form(a.num, nl, i);
    ld[static_cast<std::size_t>(i)] = PolyOps<P>::lowest_form(a.den, dl, i);
    scale_n = std::max(scale_n, std::abs(ln[static_cast<std::size_t>(i)]));
    scale_d = std::max(scale_d, std::abs(ld[static_cast<std::size_t>(i)]));
  }
  int witnessed = 0;
  for (int i = 0; i < dirs; ++i) {
    double d = ld[static_cast<std::size_t>(i)];
    if (std::abs(d) <= 1e-9 * scale_d) continue; // approaches the singular set
    double n = ln[static_cast<std::size_t>(i)];
    if (n * d >= -1e-9 * scale_n * scale_d)
      raise(ErrorKind::domain_error, "exp of a quotient that is not uniformly -infinity");
    ++witnessed;
  }
  if (witnessed == 0)
    raise(ErrorKind::domain_error, "exp of a quotient with no resolvable direction");
  return JetVal<P>::flat_zero();
}

template <class P>
JetVal<P> jv_exp(const JetCtx<P>& ctx, const JetVal<P>& a) {
  using K = typename JetVal<P>::Kind;
  if (a.kind == K::flat) return JetVal<P>::regular(P::constant(ctx.cap, 1.0));
  if (a.kind == K::pole) return jv_exp_pole(a);
  double c0 = const_term(a.poly);
  double e0 = std::exp(c0);
  if (!std::isfinite(e0)) raise(ErrorKind::domain_error, "exp overflow in jet");
  std::vector<double> taylor(static_cast<std::size_t>(a.poly.cap()) + 1);
  double f = e0;
  for (int k = 0; k <= a.poly.cap(); ++k) {
    taylor[static_cast<std::size_t>(k)] = f;
    f /= (k + 1);
  }
  return JetVal<P>::regular(compose_series(a.poly, taylor));
}

template <class P>
JetVal<P> jv_log(const JetCtx<P>& ctx, const JetVal<P>& a) {
  using K = typename JetVal<P>::Kind;
  if (a.kind != K::regular) raise(ErrorKind::domain_error, "log of a singular jet");
  double c0 = const_term(a.poly);
  if (c0 <= 0.0) raise(ErrorKind::domain_error, "log of nonpositive jet value");
  std::vector<double> taylor(static_cast<std::size_t>(a.poly.cap()) + 1);
  taylor[0] = std::log(c0);
  double p = 1.0 / c0;
  for (int k = 1; k <= a.poly.cap(); ++k) {
    taylor[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 1.0 : -1.0) * p / k;
    p /= c0;
  }
  return JetVal<P>::regular(compose_series(a.poly, taylor));
}

template <class P>
JetVal<P> jv_sqrt(const JetCtx<P>& ctx, const JetVal<P>& a) {
  using K = typename JetVal<P>::Kind;
  if (a.kind == K::flat) return JetVal<P>::flat_zero();
  if (a.kind == K::pole) raise(ErrorKind::domain_error, "sqrt of a singular jet");
  double c0 = const_term(a.poly);
  if (c0 < 0.0) raise(ErrorKind::domain_error, "sqrt of negative jet value");
  if (c0 == 0.0) raise(ErrorKind::domain_error, "sqrt of a jet vanishing at the base point");
  std::vector<double> taylor(static_cast<std::size_t>(a.poly.cap()) + 1);
  double coef = std::sqrt(c0);
  // binomial series: coef_k = C(1/2, k) c0^(1/2 - k)
  for (int k = 0; k <= a.poly.cap(); ++k) {
    taylor[static_cast<std::size_t>(k)] = coef;
    coef *= (0.5 - k) / (k + 1) / c0;
  }
  return JetVal<P>::regular(compose_series(a.poly, taylor));
}

template <class P>
JetVal<P> jet_eval(JetCtx<P>& ctx, const Expr& e) {
  auto it = ctx.memo.find(e.get());
  if (it != ctx.memo.end()) return it->second;
  JetVal<P> r;
  switch (e->kind) {
    case ExprKind::constant:
      r = JetVal<P>::regular(P::constant(ctx.cap, e->value));
      break;
    case ExprKind::variable: {
      if (e->var >= static_cast<int>(ctx.vars->size()))
        raise(ErrorKind::domain_error, "variable index exceeds curve dimension");
      r = JetVal<P>::regular((*ctx.vars)[static_cast<std::size_t>(e->var)]);
      break;
    }
    case ExprKind::add: r = jv_add(ctx, jet_eval(ctx, e->a), jet_eval(ctx, e->b)); break;
    case ExprKind::sub: r = jv_sub(ctx, jet_eval(ctx, e->a), jet_eval(ctx, e->b)); break;
    case ExprKind::mul: r = jv_mul(ctx, jet_eval(ctx, e->a), jet_eval(ctx, e->b)); break;
    case ExprKind::div: r = jv_div(ctx, jet_eval(ctx, e->a), jet_eval(ctx, e->b)); break;
    case ExprKind::ipow: r = jv_ipow(ctx, jet_eval(ctx, e->a), e->power); break;
    case ExprKind::exp_fn: r = jv_exp(ctx, jet_eval(ctx, e->a)); break;
    case ExprKind::log_fn: r = jv_log(ctx, jet_eval(ctx, e->a)); break;
    case ExprKind::sqrt_fn: r = jv_sqrt(ctx, jet_eval(ctx, e->a)); break;
  }
  ctx.memo.emplace(e.get(), r);
  return r;
}

template <class P>
JetVal<P> run_jet(const Expr& e, const std::vector<P>& coords, int cap, int pole_cap) {
  JetCtx<P> ctx;
  ctx.cap = cap;
  ctx.pole_cap = pole_cap;
  ctx.vars = &coords;
  return jet_eval(ctx, e);
}

} // namespace

// --- public API -------------------------------------------------------------------

int Jet1D::first_nonzero(double rel_tol) const {
  double m = 0.0;
  for (double v : c) m = std::max(m, std::abs(v));
  double tol = rel_tol * (1.0 + m);
  for (std::size_t i = 0; i < c.size(); ++i)
    if (std::abs(c[i]) > tol) return static_cast<int>(i);
  return -1;
}

Jet1D curve_jet(const Expr& e, const std::vector<Poly1>& coords, int M) {
  if (M > kMaxJetOrder)
    raise(ErrorKind::usage_error, "jet order exceeds configured maximum " + std::to_string(kMaxJetOrder));
  std::vector<Poly1> lifted;
  lifted.reserve(coords.size());
  for (const Poly1& p : coords) lifted.push_back(p.lifted(M));
  JetVal<Poly1> v = run_jet(e, lifted, M, std::max(M, 128));
  Jet1D out;
  out.c.assign(static_cast<std::size_t>(M) + 1, 0.0);
  if (v.kind == JetVal<Poly1>::Kind::flat) return out;
  if (v.kind == JetVal<Poly1>::Kind::pole)
    raise(ErrorKind::domain_error, "expression has a pole along the curve");
  for (int i = 0; i <= M; ++i) {
    out.c[static_cast<std::size_t>(i)] = v.poly[i];
    if (!std::isfinite(out.c[static_cast<std::size_t>(i)]))
      raise(ErrorKind::domain_error, "non-finite jet coefficient");
  }
  return out;
}

Jet1D curve_jet(const Expr& e, const std::vector<std::vector<double>>& coords, int M) {
  std::vector<Poly1> ps;
  ps.reserve(coords.size());
  for (const auto& cs : coords) {
    Poly1 p(std::max<int>(M, static_cast<int>(cs.size()) - 1));
    for (std::size_t i = 0; i < cs.size(); ++i)
      if (static_cast<int>(i) <= p.cap()) p[static_cast<int>(i)] = cs[i];
    ps.push_back(p.lifted(M));
  }
  return curve_jet(e, ps, M);
}

int BiJet::vanishing_order(double rel_tol) const {
  if (flat) return poly.cap() + 1;
  double tol = rel_tol * (1.0 + poly.max_abs());
  for (int d = 0; d <= poly.cap(); ++d)
    for (int j = 0; j <= d; ++j)
      if (std::abs(poly.at(d, j)) > tol) return d;
  return poly.cap() + 1;
}

std::complex<double> BiJet::bidegree(int p, int q) const {
  // s^a t^b coefficients -> zeta^p zbar^q with s=(z+zb)/2, t=(z-zb)/(2i)
  int d = p + q;
  if (flat || d > poly.cap()) return {0.0, 0.0};
  std::complex<double> total = 0.0;
  // expand each monomial s^(d-b) t^b of total degree d
  for (int b = 0; b <= d; ++b) {
    double c = poly.at(d, b);
    if (c == 0.0) continue;
    int a = d - b;
    // (z+zb)^a/2^a * (z-zb)^b/(2i)^b; coefficient of z^p zb^q
    std::complex<double> coef = 0.0;
    for (int k = std::max(0, p - b); k <= std::min(a, p); ++k) {
      int l = p - k; // from the t-part
      double binoms = 0.0;
      // C(a,k) * C(b,l) * (-1)^(b-l)
      auto binom = [](int n, int r) {
        double v = 1.0;
        for (int i = 1; i <= r; ++i) v = v * (n - r + i) / i;
        return v;
      };
      binoms = binom(a, k) * binom(b, l) * ((b - l) % 2 == 0 ? 1.0 : -1.0);
      coef += binoms;
    }
    std::complex<double> inv2i = std::complex<double>(0.0, -0.5); // 1/(2i)
    total += c * coef * std::pow(0.5, a) * std::pow(inv2i, b);
  }
  return total;
}

BiJet disc_jet(const Expr& e, const std::vector<Poly2>& coords, int M) {
  std::vector<Poly2> lifted;
  lifted.reserve(coords.size());
  for (const Poly2& p : coords) lifted.push_back(p.lifted(M));
  JetVal<Poly2> v = run_jet(e, lifted, M, std::max(2 * M + 8, 32));
  BiJet out;
  if (v.kind == JetVal<Poly2>::Kind::flat) {
    out.poly = Poly2(M);
    out.flat = true;
    return out;
  }
  if (v.kind == JetVal<Poly2>::Kind::pole)
    raise(ErrorKind::domain_error, "expression has a pole on the disc");
  out.poly = v.poly.cap() == M ? v.poly : v.poly.lifted(M);
  for (int d = 0; d <= M; ++d)
    for (int j = 0; j <= d; ++j)
      if (!std::isfinite(out.poly.at(d, j)))
        raise(ErrorKind::domain_error, "non-finite jet coefficient");
  return out;
}

void complex_poly_coords(std::span<const std::complex<double>> coeffs, int cap,
                         Poly2& re_out, Poly2& im_out) {
  re_out = Poly2(cap);
  im_out = Poly2(cap);
  // zeta^k expanded as (s + i t)^k
  Poly2 zr = Poly2::constant(cap, 1.0), zi(cap);
  Poly2 s(cap), t(cap);
  if (cap >= 1) {
    s.at(1, 0) = 1.0;
    t.at(1, 1) = 1.0;
  }
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (static_cast<int>(k) > cap) break;
    std::complex<double> a = coeffs[k];
    re_out = add(re_out, sub(scale(zr, a.real()), scale(zi, a.imag())));
    im_out = add(im_out, add(scale(zr, a.imag()), scale(zi, a.real())));
    // z^(k+1) = z^k * (s + it)
    Poly2 nzr = sub(mul(zr, s), mul(zi, t));
    Poly2 nzi = add(mul(zr, t), mul(zi, s));
    zr = nzr;
    zi = nzi;
  }
}

std::vector<Poly1> line_curve(std::span<const double> x, std::span<const double> dir, int cap) {
  std::vector<Poly1> coords(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Poly1 p(cap);
    p[0] = x[i];
    if (cap >= 1) p[1] = i < dir.size() ? dir[i] : 0.0;
    coords[i] = p;
  }
  return coords;
}

namespace {

std::vector<std::vector<double>> default_probe_dirs(std::size_t dim) {
  std::vector<std::vector<double>> dirs;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<double> d(dim, 0.0);
    d[i] = 1.0;
    dirs.push_back(d);
  }
  std::vector<double> ones(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  dirs.push_back(ones);
  std::vector<double> mixed(dim);
  for (std::size_t i = 0; i < dim; ++i) mixed[i] = 0.3 + 0.17 * static_cast<double>(i + 1);
  dirs.push_back(mixed);
  return dirs;
}

} // namespace

double eval_limit(const Expr& e, std::span<const double> x,
                  const std::vector<std::vector<double>>& probe_dirs) {
  try {
    return eval(e, x);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::domain_error) throw;
    std::vector<std::vector<double>> dirs = probe_dirs;
    for (auto& d : default_probe_dirs(x.size())) dirs.push_back(std::move(d));
    for (const auto& d : dirs) {
      try {
        Jet1D jet = curve_jet(e, line_curve(x, d, 8), 8);
        return jet.c[0];
      } catch (const Error&) {
        continue;
      }
    }
    throw;
  }
}

std::complex<double> eval_limit(const CExpr& e, std::span<const double> x,
                                const std::vector<std::vector<double>>& probe_dirs) {
  return {eval_limit(e.re, x, probe_dirs), eval_limit(e.im, x, probe_dirs)};
}

} // namespace levilab
