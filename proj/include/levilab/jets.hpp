#pragma once

#include <complex>
#include <span>
#include <vector>

#include "levilab/expr.hpp"

namespace levilab {

// Truncated Taylor ("jet") arithmetic propagated through expression trees.
//
// Two carrier types: Poly1 for jets along a one-parameter curve, Poly2 for
// jets in the two real parameters (Re zeta, Im zeta) of an analytic disc.
// Division by a jet that vanishes at 0 produces a formal quotient; the only
// way such a quotient re-enters regular arithmetic is exp(q) with q -> -inf
// uniformly, which is exactly zero to all orders (flat).  This makes
// defining functions like |z1|^2 + 2 exp(-1/|z2|^2) - 1 jet-computable at
// their flat points.

class Poly1 {
public:
  Poly1() = default;
  explicit Poly1(int cap) : c_(static_cast<std::size_t>(cap) + 1, 0.0) {}
  static Poly1 constant(int cap, double v) {
    Poly1 p(cap);
    p.c_[0] = v;
    return p;
  }

  int cap() const { return static_cast<int>(c_.size()) - 1; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  std::span<const double> coeffs() const { return c_; }

  double max_abs() const;
  int lowest_degree(double rel_tol) const; // -1 when zero
  Poly1 lifted(int new_cap) const;

private:
  std::vector<double> c_;
};

Poly1 add(const Poly1& a, const Poly1& b);
Poly1 sub(const Poly1& a, const Poly1& b);
Poly1 scale(const Poly1& a, double s);
Poly1 mul(const Poly1& a, const Poly1& b);

// Bivariate polynomial in (s, t), truncated at total degree cap.
class Poly2 {
public:
  Poly2() = default;
  explicit Poly2(int cap);
  static Poly2 constant(int cap, double v);

  int cap() const { return cap_; }
  // coefficient of s^(d-j) t^j
  double at(int d, int j) const { return c_[idx(d, j)]; }
  double& at(int d, int j) { return c_[idx(d, j)]; }

  double max_abs() const;
  int lowest_degree(double rel_tol) const;
  Poly2 lifted(int new_cap) const;
  // value of the homogeneous part of degree d at (cos th, sin th)
  double homogeneous_at(int d, double cos_th, double sin_th) const;

private:
  static std::size_t idx(int d, int j) {
    return static_cast<std::size_t>(d) * (d + 1) / 2 + j;
  }
  int cap_ = 0;
  std::vector<double> c_;
};

Poly2 add(const Poly2& a, const Poly2& b);
Poly2 sub(const Poly2& a, const Poly2& b);
Poly2 scale(const Poly2& a, double s);
Poly2 mul(const Poly2& a, const Poly2& b);

// --- jets of expressions -----------------------------------------------------

// Taylor coefficients c_0..c_M of t -> e(gamma(t)) at t = 0.
struct Jet1D {
  std::vector<double> c;

  int order() const { return static_cast<int>(c.size()) - 1; }
  // lowest k with |c_k| > rel_tol * (1 + max |c|); -1 when all vanish
  int first_nonzero(double rel_tol = 1e-8) const;
};

inline constexpr int kMaxJetOrder = 16;

// coords[i] is the Taylor polynomial of coordinate x_{i+1} along the curve.
// Throws Error(domain_error) when the jet is not representable (genuine
// pole or singular composition).
Jet1D curve_jet(const Expr& e, const std::vector<Poly1>& coords, int M);

// Convenience: coords given as coefficient lists (c0, c1, ...).
Jet1D curve_jet(const Expr& e, const std::vector<std::vector<double>>& coords, int M);

struct BiJet {
  Poly2 poly;
  bool flat = false; // function vanishes at 0 to infinite order

  // lowest total degree with a coefficient above rel_tol * (1 + max |c|);
  // returns cap()+1 when every stored coefficient vanishes.
  int vanishing_order(double rel_tol = 1e-8) const;
  // coefficient of zeta^p zbar^q
  std::complex<double> bidegree(int p, int q) const;
};

BiJet disc_jet(const Expr& e, const std::vector<Poly2>& coords, int M);

// Real/imag Poly2 pair of sum_k a_k zeta^k, zeta = s + i t.
void complex_poly_coords(std::span<const std::complex<double>> coeffs, int cap,
                         Poly2& re_out, Poly2& im_out);

// Straight-line curve x + t * dir as Poly1 coordinates.
std::vector<Poly1> line_curve(std::span<const double> x, std::span<const double> dir, int cap);

// Evaluate e at x, extending smoothly over removable singularities: strict
// evaluation first, then the limit along probe lines computed by jets.
// Throws the original domain error when no probe resolves the value.
double eval_limit(const Expr& e, std::span<const double> x,
                  const std::vector<std::vector<double>>& probe_dirs = {});
std::complex<double> eval_limit(const CExpr& e, std::span<const double> x,
                                const std::vector<std::vector<double>>& probe_dirs = {});

} // namespace levilab
