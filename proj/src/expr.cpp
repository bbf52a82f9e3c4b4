#include "levilab/expr.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace levilab {

namespace {

std::size_t hash_combine(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t node_hash(ExprKind k, double value, int var, int power,
                      const Expr& a, const Expr& b) {
  std::size_t h = static_cast<std::size_t>(k) * 0x100000001b3ULL;
  switch (k) {
    case ExprKind::constant:
      h = hash_combine(h, std::hash<double>{}(value));
      break;
    case ExprKind::variable:
      h = hash_combine(h, static_cast<std::size_t>(var) + 17);
      break;
    case ExprKind::ipow:
      h = hash_combine(h, static_cast<std::size_t>(power) + 0x51ed);
      h = hash_combine(h, a->hash);
      break;
    default:
      if (a) h = hash_combine(h, a->hash);
      if (b) h = hash_combine(h, b->hash);
      break;
  }
  return h;
}

Expr make(ExprKind k, double value, int var, int power, Expr a, Expr b) {
  return std::make_shared<ExprNode>(k, value, var, power, std::move(a), std::move(b));
}

bool is_const_node(const Expr& e) { return e->kind == ExprKind::constant; }

} // namespace

ExprNode::ExprNode(ExprKind k, double v, int vi, int p, Expr lhs, Expr rhs)
    : kind(k), value(v), var(vi), power(p), a(std::move(lhs)), b(std::move(rhs)) {
  hash = node_hash(kind, value, var, power, a, b);
}

Expr constant(double c) { return make(ExprKind::constant, c, -1, 0, nullptr, nullptr); }

Expr variable(int index) {
  if (index < 0) raise(ErrorKind::usage_error, "negative variable index");
  return make(ExprKind::variable, 0.0, index, 0, nullptr, nullptr);
}

bool is_zero(const Expr& e) { return is_const_node(e) && e->value == 0.0; }
bool is_const(const Expr& e, double c) { return is_const_node(e) && e->value == c; }

Expr add(Expr a, Expr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (is_const_node(a) && is_const_node(b)) return constant(a->value + b->value);
  return make(ExprKind::add, 0, -1, 0, std::move(a), std::move(b));
}

Expr sub(Expr a, Expr b) {
  if (is_zero(b)) return a;
  if (is_const_node(a) && is_const_node(b)) return constant(a->value - b->value);
  if (struct_equal(a, b)) return constant(0.0);
  return make(ExprKind::sub, 0, -1, 0, std::move(a), std::move(b));
}

Expr mul(Expr a, Expr b) {
  if (is_zero(a) || is_zero(b)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (is_const_node(a) && is_const_node(b)) return constant(a->value * b->value);
  // collect powers of a common base so derivative chains keep a single
  // denominator: b^i * b^j -> b^(i+j)
  auto base_of = [](const Expr& e) -> std::pair<Expr, int> {
    if (e->kind == ExprKind::ipow) return {e->a, e->power};
    return {e, 1};
  };
  auto [ba, ka] = base_of(a);
  auto [bb, kb] = base_of(b);
  if ((ka != 1 || kb != 1) && struct_equal(ba, bb)) return ipow(ba, ka + kb);
  return make(ExprKind::mul, 0, -1, 0, std::move(a), std::move(b));
}

Expr div(Expr a, Expr b) {
  if (is_zero(a)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  if (is_const_node(a) && is_const_node(b) && b->value != 0.0)
    return constant(a->value / b->value);
  if (struct_equal(a, b)) return constant(1.0);
  // keep a single division per path: (a/b)/c -> a/(b*c), a/(b/c) -> (a*c)/b
  if (a->kind == ExprKind::div) return div(a->a, mul(a->b, std::move(b)));
  if (b->kind == ExprKind::div) return div(mul(std::move(a), b->b), b->a);
  return make(ExprKind::div, 0, -1, 0, std::move(a), std::move(b));
}

Expr ipow(Expr a, int k) {
  if (k == 0) return constant(1.0);
  if (k == 1) return a;
  if (is_const_node(a)) {
    if (a->value != 0.0 || k > 0) return constant(std::pow(a->value, k));
  }
  if (a->kind == ExprKind::ipow) return ipow(a->a, a->power * k);
  return make(ExprKind::ipow, 0, -1, k, std::move(a), nullptr);
}

Expr exp_of(Expr a) {
  if (is_const_node(a)) return constant(std::exp(a->value));
  return make(ExprKind::exp_fn, 0, -1, 0, std::move(a), nullptr);
}

Expr log_of(Expr a) {
  if (is_const_node(a) && a->value > 0.0) return constant(std::log(a->value));
  return make(ExprKind::log_fn, 0, -1, 0, std::move(a), nullptr);
}

Expr sqrt_of(Expr a) {
  if (is_const_node(a) && a->value >= 0.0) return constant(std::sqrt(a->value));
  return make(ExprKind::sqrt_fn, 0, -1, 0, std::move(a), nullptr);
}

Expr neg(Expr a) { return sub(constant(0.0), std::move(a)); }

Expr abs_sq(int j) { return add(ipow(variable(2 * j), 2), ipow(variable(2 * j + 1), 2)); }
Expr re_z(int j) { return variable(2 * j); }
Expr im_z(int j) { return variable(2 * j + 1); }

bool struct_equal(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::constant: return a->value == b->value;
    case ExprKind::variable: return a->var == b->var;
    case ExprKind::ipow:
      return a->power == b->power && struct_equal(a->a, b->a);
    default:
      if (!struct_equal(a->a, b->a)) return false;
      if (!a->b && !b->b) return true;
      return a->b && b->b && struct_equal(a->b, b->b);
  }
}

int max_var_index(const Expr& e) {
  int best = -1;
  std::unordered_map<const ExprNode*, bool> seen;
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    if (!n || seen.count(n.get())) return;
    seen[n.get()] = true;
    if (n->kind == ExprKind::variable) best = std::max(best, n->var);
    walk(n->a);
    walk(n->b);
  };
  walk(e);
  return best;
}

std::size_t dag_node_count(const Expr& e) {
  std::unordered_map<const ExprNode*, bool> seen;
  std::function<void(const Expr&)> walk = [&](const Expr& n) {
    if (!n || seen.count(n.get())) return;
    seen[n.get()] = true;
    walk(n->a);
    walk(n->b);
  };
  walk(e);
  return seen.size();
}

// --- evaluation ---------------------------------------------------------------

namespace {

double eval_node(const ExprNode* n, std::span<const double> x,
                 std::unordered_map<const ExprNode*, double>& memo);

double eval_child(const Expr& e, std::span<const double> x,
                  std::unordered_map<const ExprNode*, double>& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  double v = eval_node(e.get(), x, memo);
  memo.emplace(e.get(), v);
  return v;
}

double eval_node(const ExprNode* n, std::span<const double> x,
                 std::unordered_map<const ExprNode*, double>& memo) {
  switch (n->kind) {
    case ExprKind::constant: return n->value;
    case ExprKind::variable:
      if (n->var >= static_cast<int>(x.size()))
        raise(ErrorKind::domain_error,
              "variable x" + std::to_string(n->var + 1) + " out of range for point of dimension " +
                  std::to_string(x.size()));
      return x[n->var];
    case ExprKind::add: return eval_child(n->a, x, memo) + eval_child(n->b, x, memo);
    case ExprKind::sub: return eval_child(n->a, x, memo) - eval_child(n->b, x, memo);
    case ExprKind::mul: return eval_child(n->a, x, memo) * eval_child(n->b, x, memo);
    case ExprKind::div: {
      double den = eval_child(n->b, x, memo);
      if (den == 0.0) raise(ErrorKind::domain_error, "division by zero");
      return eval_child(n->a, x, memo) / den;
    }
    case ExprKind::ipow: {
      double base = eval_child(n->a, x, memo);
      if (base == 0.0 && n->power < 0) raise(ErrorKind::domain_error, "zero to a negative power");
      return std::pow(base, n->power);
    }
    case ExprKind::exp_fn: return std::exp(eval_child(n->a, x, memo));
    case ExprKind::log_fn: {
      double v = eval_child(n->a, x, memo);
      if (v <= 0.0) raise(ErrorKind::domain_error, "log of nonpositive value");
      return std::log(v);
    }
    case ExprKind::sqrt_fn: {
      double v = eval_child(n->a, x, memo);
      if (v < 0.0) raise(ErrorKind::domain_error, "sqrt of negative value");
      return std::sqrt(v);
    }
  }
  raise(ErrorKind::domain_error, "corrupt expression node");
}

} // namespace

double eval(const Expr& e, std::span<const double> x) {
  std::unordered_map<const ExprNode*, double> memo;
  return eval_child(e, x, memo);
}

// --- differentiation ------------------------------------------------------------

namespace {

Expr diff_memo(const Expr& e, int var, std::unordered_map<const ExprNode*, Expr>& memo) {
  auto it = memo.find(e.get());
  if (it != memo.end()) return it->second;
  Expr r;
  switch (e->kind) {
    case ExprKind::constant: r = constant(0.0); break;
    case ExprKind::variable: r = constant(e->var == var ? 1.0 : 0.0); break;
    case ExprKind::add:
      r = add(diff_memo(e->a, var, memo), diff_memo(e->b, var, memo));
      break;
    case ExprKind::sub:
      r = sub(diff_memo(e->a, var, memo), diff_memo(e->b, var, memo));
      break;
    case ExprKind::mul:
      r = add(mul(diff_memo(e->a, var, memo), e->b), mul(e->a, diff_memo(e->b, var, memo)));
      break;
    case ExprKind::div: {
      // d(a / b^k) = (a' b - k a b') / b^(k+1), keeping the denominator a
      // single power so repeated differentiation grows it linearly
      Expr base = e->b;
      int k = 1;
      if (e->b->kind == ExprKind::ipow && e->b->power > 0) {
        base = e->b->a;
        k = e->b->power;
      }
      Expr num = sub(mul(diff_memo(e->a, var, memo), base),
                     mul(mul(constant(static_cast<double>(k)), e->a), diff_memo(base, var, memo)));
      r = div(num, ipow(base, k + 1));
      break;
    }
    case ExprKind::ipow:
      r = mul(mul(constant(static_cast<double>(e->power)), ipow(e->a, e->power - 1)),
              diff_memo(e->a, var, memo));
      break;
    case ExprKind::exp_fn:
      r = mul(exp_of(e->a), diff_memo(e->a, var, memo));
      break;
    case ExprKind::log_fn:
      r = div(diff_memo(e->a, var, memo), e->a);
      break;
    case ExprKind::sqrt_fn:
      r = div(diff_memo(e->a, var, memo), mul(constant(2.0), sqrt_of(e->a)));
      break;
  }
  memo.emplace(e.get(), r);
  return r;
}

} // namespace

Expr diff(const Expr& e, int var) {
  std::unordered_map<const ExprNode*, Expr> memo;
  return diff_memo(e, var, memo);
}

Expr substitute(const Expr& e, const std::vector<Expr>& repl) {
  std::unordered_map<const ExprNode*, Expr> memo;
  std::function<Expr(const Expr&)> walk = [&](const Expr& n) -> Expr {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    Expr r;
    switch (n->kind) {
      case ExprKind::constant: r = n; break;
      case ExprKind::variable:
        if (n->var < static_cast<int>(repl.size()) && repl[n->var])
          r = repl[n->var];
        else
          r = n;
        break;
      case ExprKind::add: r = add(walk(n->a), walk(n->b)); break;
      case ExprKind::sub: r = sub(walk(n->a), walk(n->b)); break;
      case ExprKind::mul: r = mul(walk(n->a), walk(n->b)); break;
      case ExprKind::div: r = div(walk(n->a), walk(n->b)); break;
      case ExprKind::ipow: r = ipow(walk(n->a), n->power); break;
      case ExprKind::exp_fn: r = exp_of(walk(n->a)); break;
      case ExprKind::log_fn: r = log_of(walk(n->a)); break;
      case ExprKind::sqrt_fn: r = sqrt_of(walk(n->a)); break;
    }
    memo.emplace(n.get(), r);
    return r;
  };
  return walk(e);
}

namespace {

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e->hash; }
};
struct ExprEq {
  bool operator()(const Expr& a, const Expr& b) const { return struct_equal(a, b); }
};

} // namespace

Expr compact(const Expr& e) {
  std::unordered_map<Expr, Expr, ExprHash, ExprEq> interned;
  std::unordered_map<const ExprNode*, Expr> memo;
  std::function<Expr(const Expr&)> walk = [&](const Expr& n) -> Expr {
    auto it = memo.find(n.get());
    if (it != memo.end()) return it->second;
    Expr rebuilt;
    switch (n->kind) {
      case ExprKind::constant:
      case ExprKind::variable:
        rebuilt = n;
        break;
      case ExprKind::ipow:
        rebuilt = ipow(walk(n->a), n->power);
        break;
      case ExprKind::exp_fn: rebuilt = exp_of(walk(n->a)); break;
      case ExprKind::log_fn: rebuilt = log_of(walk(n->a)); break;
      case ExprKind::sqrt_fn: rebuilt = sqrt_of(walk(n->a)); break;
      case ExprKind::add: rebuilt = add(walk(n->a), walk(n->b)); break;
      case ExprKind::sub: rebuilt = sub(walk(n->a), walk(n->b)); break;
      case ExprKind::mul: rebuilt = mul(walk(n->a), walk(n->b)); break;
      case ExprKind::div: rebuilt = div(walk(n->a), walk(n->b)); break;
    }
    auto [pos, inserted] = interned.emplace(rebuilt, rebuilt);
    Expr canonical = pos->second;
    memo.emplace(n.get(), canonical);
    return canonical;
  };
  return walk(e);
}

// --- printing -------------------------------------------------------------------

namespace {

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::add:
    case ExprKind::sub: return 1;
    case ExprKind::mul:
    case ExprKind::div: return 2;
    case ExprKind::ipow: return 3;
    default: return 4;
  }
}

void print(const Expr& e, std::ostringstream& out, int parent_prec, bool right_side) {
  int prec = precedence(e->kind);
  bool need_paren = prec < parent_prec || (prec == parent_prec && right_side);
  switch (e->kind) {
    case ExprKind::constant: {
      if (e->value < 0.0) {
        out << "(" << e->value << ")";
      } else {
        out << e->value;
      }
      return;
    }
    case ExprKind::variable:
      out << "x" << (e->var + 1);
      return;
    case ExprKind::exp_fn:
      out << "exp(";
      print(e->a, out, 0, false);
      out << ")";
      return;
    case ExprKind::log_fn:
      out << "log(";
      print(e->a, out, 0, false);
      out << ")";
      return;
    case ExprKind::sqrt_fn:
      out << "sqrt(";
      print(e->a, out, 0, false);
      out << ")";
      return;
    case ExprKind::ipow:
      if (need_paren) out << "(";
      print(e->a, out, prec + 1, false);
      out << "^";
      if (e->power < 0)
        out << "(" << e->power << ")";
      else
        out << e->power;
      if (need_paren) out << ")";
      return;
    default: {
      const char* op = e->kind == ExprKind::add   ? " + "
                       : e->kind == ExprKind::sub ? " - "
                       : e->kind == ExprKind::mul ? "*"
                                                  : "/";
      if (need_paren) out << "(";
      print(e->a, out, prec, false);
      out << op;
      print(e->b, out, prec, true);
      if (need_paren) out << ")";
      return;
    }
  }
}

} // namespace

std::string to_string(const Expr& e) {
  std::ostringstream out;
  out.precision(17);
  print(e, out, 0, false);
  return out.str();
}

// --- complex pairs -----------------------------------------------------------------

CExpr cadd(const CExpr& a, const CExpr& b) { return {add(a.re, b.re), add(a.im, b.im)}; }
CExpr csub(const CExpr& a, const CExpr& b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }

CExpr cmul(const CExpr& a, const CExpr& b) {
  return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}

CExpr cscale(const CExpr& a, std::complex<double> c) {
  return cmul(a, CExpr::of(c));
}

CExpr conj(const CExpr& a) { return {a.re, neg(a.im)}; }

bool is_zero(const CExpr& a) { return is_zero(a.re) && is_zero(a.im); }

std::complex<double> eval(const CExpr& e, std::span<const double> x) {
  return {eval(e.re, x), eval(e.im, x)};
}

CExpr wirtinger(const Expr& e, int j, bool conjugate) {
  Expr dx = diff(e, 2 * j);
  Expr dy = diff(e, 2 * j + 1);
  double sign = conjugate ? 0.5 : -0.5;
  return {mul(constant(0.5), dx), mul(constant(sign), dy)};
}

CExpr wirtinger(const CExpr& e, int j, bool conjugate) {
  CExpr du = wirtinger(e.re, j, conjugate);
  CExpr dv = wirtinger(e.im, j, conjugate);
  // d(u + iv) = du + i dv
  return {sub(du.re, dv.im), add(du.im, dv.re)};
}

// --- compiled programs ----------------------------------------------------------------

Program Program::compile(std::span<const Expr> roots) {
  Program p;
  std::unordered_map<const ExprNode*, std::int32_t> slot;
  std::function<std::int32_t(const Expr&)> emit = [&](const Expr& n) -> std::int32_t {
    auto it = slot.find(n.get());
    if (it != slot.end()) return it->second;
    Instr ins;
    ins.op = n->kind;
    ins.value = n->value;
    ins.var = n->var;
    ins.power = n->power;
    if (n->a) ins.a = emit(n->a);
    if (n->b) ins.b = emit(n->b);
    std::int32_t id = static_cast<std::int32_t>(p.code_.size());
    p.code_.push_back(ins);
    slot.emplace(n.get(), id);
    return id;
  };
  for (const Expr& r : roots) p.outputs_.push_back(emit(r));
  return p;
}

bool Program::eval(std::span<const double> x, std::span<double> out) const {
  thread_local std::vector<double> scratch;
  if (scratch.size() < code_.size()) scratch.resize(code_.size());
  std::vector<double>& s = scratch;
  bool ok = true;
  for (std::size_t i = 0; i < code_.size(); ++i) {
    const Instr& ins = code_[i];
    double v = 0.0;
    switch (ins.op) {
      case ExprKind::constant: v = ins.value; break;
      case ExprKind::variable:
        if (ins.var >= static_cast<int>(x.size())) return false;
        v = x[ins.var];
        break;
      case ExprKind::add: v = s[ins.a] + s[ins.b]; break;
      case ExprKind::sub: v = s[ins.a] - s[ins.b]; break;
      case ExprKind::mul: v = s[ins.a] * s[ins.b]; break;
      case ExprKind::div: v = s[ins.a] / s[ins.b]; break;
      case ExprKind::ipow: v = std::pow(s[ins.a], ins.power); break;
      case ExprKind::exp_fn: v = std::exp(s[ins.a]); break;
      case ExprKind::log_fn:
        if (s[ins.a] <= 0.0) ok = false;
        v = std::log(s[ins.a]);
        break;
      case ExprKind::sqrt_fn:
        if (s[ins.a] < 0.0) ok = false;
        v = std::sqrt(s[ins.a]);
        break;
    }
    s[i] = v;
  }
  for (std::size_t k = 0; k < outputs_.size(); ++k) {
    out[k] = s[outputs_[k]];
    if (!std::isfinite(out[k])) ok = false;
  }
  return ok;
}

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::parse_error: return "ParseError";
    case ErrorKind::unknown_name: return "UnknownName";
    case ErrorKind::no_convergence: return "NoConvergence";
    case ErrorKind::degenerate_gradient: return "DegenerateGradient";
    case ErrorKind::not_smooth: return "NotSmooth";
    case ErrorKind::sampling_error: return "SamplingError";
    case ErrorKind::curve_not_closed: return "CurveNotClosed";
    case ErrorKind::empty_set: return "EmptySet";
    case ErrorKind::singular_disc: return "SingularDisc";
    case ErrorKind::expression_blowup: return "ExpressionBlowup";
    case ErrorKind::degenerate_data: return "DegenerateData";
    case ErrorKind::usage_error: return "UsageError";
  }
  return "Error";
}

} // namespace levilab
