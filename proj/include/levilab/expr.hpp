#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "levilab/errors.hpp"

namespace levilab {

// Real-analytic expression trees over the real coordinates x_1..x_{2n},
// with the convention z_j = x_{2j-1} + i*x_{2j}.  Nodes are immutable and
// shared; smart constructors fold constants and elide zeros/ones, nothing
// more.  All indices are 0-based internally.

enum class ExprKind : std::uint8_t {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  ipow, // integer power, exponent in `power`
  exp_fn,
  log_fn,
  sqrt_fn,
};

class ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

class ExprNode {
public:
  ExprKind kind;
  double value = 0.0; // constant payload
  int var = -1;       // variable payload
  int power = 0;      // ipow payload
  Expr a, b;          // children; b empty for unary, both empty for leaves
  std::size_t hash = 0;

  ExprNode(ExprKind k, double v, int vi, int p, Expr lhs, Expr rhs);
};

// --- constructors ---------------------------------------------------------

Expr constant(double c);
Expr variable(int index);
Expr add(Expr a, Expr b);
Expr sub(Expr a, Expr b);
Expr mul(Expr a, Expr b);
Expr div(Expr a, Expr b);
Expr ipow(Expr a, int k);
Expr exp_of(Expr a);
Expr log_of(Expr a);
Expr sqrt_of(Expr a);
Expr neg(Expr a);

// |z_j|^2 = x_{2j}^2 + x_{2j+1}^2 for 0-based complex index j
Expr abs_sq(int j);
Expr re_z(int j);
Expr im_z(int j);

// --- queries ---------------------------------------------------------------

bool struct_equal(const Expr& a, const Expr& b);
int max_var_index(const Expr& e); // -1 if no variables
std::size_t dag_node_count(const Expr& e);
bool is_zero(const Expr& e);
bool is_const(const Expr& e, double c);
std::string to_string(const Expr& e); // infix, parseable by parse_expr

// --- evaluation and differentiation ----------------------------------------

// Exact recursive evaluation; throws Error(domain_error) on division by
// zero, log/sqrt of a nonpositive/negative argument.  Shared subtrees are
// evaluated once.
double eval(const Expr& e, std::span<const double> x);

// Symbolic partial derivative w.r.t. x_{var+1}.
Expr diff(const Expr& e, int var);

// Replace variable i by repl[i]; entries may be null meaning "keep x_i".
Expr substitute(const Expr& e, const std::vector<Expr>& repl);

// Rebuild the DAG sharing structurally equal subtrees.
Expr compact(const Expr& e);

// --- complex-valued expressions as (re, im) pairs ---------------------------

struct CExpr {
  Expr re, im;

  static CExpr from_real(Expr r) { return {std::move(r), constant(0.0)}; }
  static CExpr of(std::complex<double> c) {
    return {constant(c.real()), constant(c.imag())};
  }
};

CExpr cadd(const CExpr& a, const CExpr& b);
CExpr csub(const CExpr& a, const CExpr& b);
CExpr cmul(const CExpr& a, const CExpr& b);
CExpr cscale(const CExpr& a, std::complex<double> c);
CExpr conj(const CExpr& a);
bool is_zero(const CExpr& a);
std::complex<double> eval(const CExpr& e, std::span<const double> x);

// d/dz_j (conjugate=false) or d/dzbar_j (conjugate=true), 0-based complex
// index j, via (d/dx - i d/dy)/2 resp. (d/dx + i d/dy)/2.
CExpr wirtinger(const Expr& e, int j, bool conjugate);
CExpr wirtinger(const CExpr& e, int j, bool conjugate);

// --- compiled evaluation -----------------------------------------------------

// Flattens one or more expressions (sharing their DAG) into a topologically
// ordered instruction list.  eval() writes one output per root and reports
// whether every intermediate stayed finite; callers fall back to the exact
// tree walk when it did not.  Safe to call concurrently (thread-local
// scratch).
class Program {
public:
  static Program compile(std::span<const Expr> roots);

  // Returns false if any output is non-finite or an intermediate left the
  // domain of log/sqrt; outputs are unspecified in that case.
  bool eval(std::span<const double> x, std::span<double> out) const;

  int num_outputs() const { return static_cast<int>(outputs_.size()); }

private:
  struct Instr {
    ExprKind op;
    std::int32_t a = -1, b = -1;
    double value = 0.0;
    std::int32_t var = -1;
    int power = 0;
  };
  std::vector<Instr> code_;
  std::vector<std::int32_t> outputs_;
};

// --- parser ------------------------------------------------------------------

// Infix grammar with variables x1..x{2n}, helpers re(zj), im(zj), absq(zj),
// functions exp/log/sqrt, operators + - * / and ^ with an integer exponent.
// Errors carry line/column.
Expr parse_expr(const std::string& text);

} // namespace levilab
