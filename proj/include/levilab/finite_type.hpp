#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "levilab/disc.hpp"
#include "levilab/domain.hpp"
#include "levilab/expr.hpp"

namespace levilab {

// Tangent holomorphic vector field sum a_j d/dz_j + sum b_j d/dzbar_j with
// expression coefficients.  The generating fields satisfy <L, d rho> = 0
// identically by construction.
struct VectorField {
  std::vector<CExpr> holo; // coefficients of d/dz_j
  std::vector<CExpr> anti; // coefficients of d/dzbar_j
  int order = 1;           // commutator order
  std::string label;

  std::size_t node_count() const;
};

// n = 2: L = rho_{z2} d/dz1 - rho_{z1} d/dz2 in the given coordinates.
// n > 2: the n-1 fields L_j = rho_{zn} d/dz_j - rho_{zj} d/dz_n; callers
// should normalize coordinates first so the normal lies along z_n.
std::vector<VectorField> tangent_fields(const DomainSpec& spec, const BoundaryPoint& P);

VectorField conjugate_field(const VectorField& f);
VectorField bracket(const VectorField& F, const VectorField& G);

// <N, d rho> = sum_j holo_j * rho_{z_j}, evaluated with the smooth-extension
// fallback at flat points.
std::complex<double> pairing_with_drho(const DomainSpec& spec, const VectorField& N,
                                       const BoundaryPoint& P,
                                       const std::vector<std::vector<double>>& probe_dirs = {});

// --- contact order -------------------------------------------------------------

struct ContactOrder {
  int order = 0;       // lowest total degree with a nonzero jet coefficient
  bool saturated = false; // every coefficient through M vanished; order == M
};

// Order of vanishing of rho(psi(zeta)) at zeta = 0 through total degree M.
// Pre: psi(0) on the boundary, psi'(0) != 0.
ContactOrder contact_order(const DomainSpec& spec, const AnalyticDisc& disc, int M,
                           double coeff_tol = 1e-8);

// --- geometric type --------------------------------------------------------------

struct GeometricTypeResult {
  int order = 0;
  bool saturated = false;        // search exhausted the cutoff M
  bool budget_exhausted = false; // Newton stalls reported, result still a lower bound
  AnalyticDisc witness;          // in the original coordinates
  std::vector<std::complex<double>> tau; // tangential direction of the witness
  int cutoff = 0;
  int degree_budget = 0;
};

// Maximizes contact order over polynomial discs (zeta tau + ..., g(zeta)) in
// normalized coordinates by zeroing jet coefficients order by order.
GeometricTypeResult geometric_type(const DomainSpec& spec, const BoundaryPoint& P,
                                   int degree_budget, int M);

// --- commutator type --------------------------------------------------------------

struct CommutatorTypeResult {
  int order = 0;
  bool saturated = false; // no nonzero pairing through order M
  bool blowup = false;    // node budget hit; order is the level reached
  std::string witness_label;
  double pairing_abs = 0.0;
  double threshold = 0.0;
  std::vector<double> max_pairing_by_order; // verified (near) zero below `order`
  int cutoff = 0;
  bool frame_dependent_note = false; // n > 2: generator frame recorded, not canonical
};

CommutatorTypeResult commutator_type(const DomainSpec& spec, const BoundaryPoint& P, int M,
                                     std::size_t node_budget = 1000000);

// --- agreement -----------------------------------------------------------------------

struct TypeReport {
  BoundaryPoint P;
  int cutoff = 0;
  GeometricTypeResult geometric;
  CommutatorTypeResult commutator;
  bool agree = false;
  bool experimental = false; // n > 2: the equivalence is checked, not asserted
};

TypeReport bloom_graham_check(const DomainSpec& spec, const BoundaryPoint& P, int degree_budget,
                              int M);

} // namespace levilab
