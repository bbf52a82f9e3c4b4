#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "levilab/expr.hpp"

namespace levilab {

struct Box {
  // per real coordinate [lo, hi]
  std::vector<std::array<double, 2>> ranges;

  bool contains(std::span<const double> x) const;
  double max_extent() const;
  static Box cube(int dim, double half_width);
};

struct BoundaryPoint {
  std::vector<double> coords; // length 2n
  double residual = 0.0;      // |rho|
  double grad_norm = 0.0;     // |grad rho|
};

// Domain Omega = { rho < 0 } for smooth entries; product/union catalog
// entries are membership-only (smooth() == false) and support membership
// and distance queries but no differential operations.
class DomainSpec {
public:
  using MemberFn = std::function<bool(std::span<const double>)>;
  // > 0 inside (distance to the complement), < 0 outside (minus the
  // distance to the closure), 0 on the boundary
  using SignedDistFn = std::function<double(std::span<const double>)>;

  DomainSpec() = default;

  static DomainSpec smooth_domain(std::string name, int n, Expr rho, Box box,
                                  double tol_boundary = 1e-9);
  static DomainSpec membership_domain(std::string name, int n, Box box,
                                      MemberFn member, SignedDistFn signed_dist);

  bool valid() const { return impl_ != nullptr; }
  const std::string& name() const;
  int n() const;
  int real_dim() const;
  bool smooth() const;
  const Expr& rho() const; // throws Error(not_smooth) for membership domains
  const Box& bounding_box() const;
  double tol_boundary() const;
  double grad_floor() const; // defining-function floor for |grad rho|

  // Fast compiled evaluation with an exact fallback that extends smoothly
  // over removable singularities (e.g. exp(-1/|z|^2) at z = 0).
  double rho_at(std::span<const double> x) const;
  Eigen::VectorXd grad_at(std::span<const double> x) const;
  Eigen::VectorXcd wirtinger_grad_at(std::span<const double> x) const; // (rho_z1..rho_zn)

  bool member(std::span<const double> x) const;     // open-Omega membership
  bool in_closure(std::span<const double> x, double tol_scale = 1e-7) const;
  bool on_boundary(std::span<const double> x, double tol_scale = 1e-7) const;

  // Euclidean distance to the boundary, valid inside and outside.
  double boundary_distance(std::span<const double> x) const;

  const std::vector<Expr>& grad_exprs() const;
  const std::vector<CExpr>& wirtinger_grad_exprs() const;

  // expression-level transform: new spec with rho replaced (same box/tols)
  DomainSpec with_rho(Expr new_rho, std::string new_name) const;

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Newton iteration along grad rho from x until |rho| <= tol_boundary.
BoundaryPoint boundary_project(const DomainSpec& spec, std::span<const double> x,
                               int max_iter = 50);

// grad rho / |grad rho| at P (points out of Omega since rho < 0 inside).
Eigen::VectorXd outward_normal(const DomainSpec& spec, const BoundaryPoint& P);

// Projection refined by tangential descent for smooth domains; exact
// per-factor formulas for the membership catalog.
double boundary_distance(const DomainSpec& spec, std::span<const double> x);

// Validates and packages a point that should already lie on the boundary.
BoundaryPoint make_boundary_point(const DomainSpec& spec, std::span<const double> x);

// Affine-unitary normalization at P: w = scale * U (z - P) with U taking the
// complex normal to the z_n axis and scale making the Re z_n coefficient 2.
// The transformed rho has value 0, vanishing tangential Wirtinger gradient
// and d rho / d w_n = 1 at w = 0.
struct NormalizedFrame {
  std::vector<double> base_point;           // P in real coordinates
  Eigen::MatrixXcd unitary;                 // U, n x n
  double scale = 1.0;                       // |rho_z(P)|
  DomainSpec transformed;

  std::vector<double> to_normalized(std::span<const double> z) const;
  std::vector<double> from_normalized(std::span<const double> w) const;
  // push a complex vector (e.g. a disc coefficient) back to z coordinates
  std::vector<std::complex<double>> vector_from_normalized(
      std::span<const std::complex<double>> w) const;
};

NormalizedFrame normalize_coordinates(const DomainSpec& spec, const BoundaryPoint& P);

// --- catalog -----------------------------------------------------------------

// Names: ball, model_type_2k, infinite_type, annulus_times_disc,
// example2_nonpseudoconvex, square_frame_times_disc.  Parameters (k, eps,
// radii) are taken from `params` with sensible defaults.
DomainSpec catalog_domain(const std::string& name,
                          const std::map<std::string, double>& params = {});
std::vector<std::string> catalog_names();

// "catalog:<name>?k=2&eps=0.01" -> catalog entry
DomainSpec domain_from_uri(const std::string& uri);

// Seeded boundary sampling: project random box points (smooth domains only).
std::vector<BoundaryPoint> sample_boundary_points(const DomainSpec& spec, int count,
                                                  std::uint64_t seed);

// Seeded interior sampling by rejection in the bounding box.
std::vector<std::vector<double>> sample_interior_points(const DomainSpec& spec, int count,
                                                        std::uint64_t seed,
                                                        long max_rejects_per_point = 4096);

} // namespace levilab
