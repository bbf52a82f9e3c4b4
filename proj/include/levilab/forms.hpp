#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "levilab/domain.hpp"
#include "levilab/parallel.hpp"

namespace levilab {

struct TangentFrame {
  BoundaryPoint P;
  Eigen::MatrixXd real_basis;     // 2n x (2n-1), orthonormal columns, each | grad rho
  Eigen::MatrixXcd complex_basis; // n x (n-1), orthonormal, each kills the Wirtinger gradient
};

TangentFrame tangent_frame(const DomainSpec& spec, const BoundaryPoint& P);

// Full second-derivative data at P, from symbolic differentiation.
Eigen::MatrixXd real_hessian(const DomainSpec& spec, const BoundaryPoint& P);
Eigen::MatrixXcd complex_hessian(const DomainSpec& spec, const BoundaryPoint& P); // rho_{z_j zbar_k}

// Restriction of the real Hessian to the real tangent basis.
Eigen::MatrixXd hessian_form(const DomainSpec& spec, const BoundaryPoint& P,
                             const TangentFrame& frame);
// Restriction of the Levi matrix to the complex tangent basis.
Eigen::MatrixXcd levi_form(const DomainSpec& spec, const BoundaryPoint& P,
                           const TangentFrame& frame);

struct FormReport {
  BoundaryPoint P;
  Eigen::MatrixXd hessian_restricted;
  Eigen::MatrixXcd levi_restricted;
  std::vector<double> hessian_eigenvalues; // ascending
  std::vector<double> levi_eigenvalues;    // ascending
  bool convex = false;
  bool strictly_convex = false;
  bool levi_pseudoconvex = false;
  bool strictly_pseudoconvex = false;
  double tol_eig = 1e-8;        // requested
  double tol_hessian = 0.0;     // scale-adjusted thresholds actually used
  double tol_levi = 0.0;
};

FormReport classify_point(const DomainSpec& spec, const BoundaryPoint& P, double tol_eig = 1e-8);

// --- Hartogs sampling check ------------------------------------------------------

struct HartogsConfig {
  long samples = 25000;        // interior centers
  int lines = 4;               // complex lines per center
  int circle_samples = 64;
  double radius_lo_frac = 1e-3; // radius as a fraction of delta(z), log-uniform
  double radius_hi_frac = 1e-1;
  double tol = 1e-7;
  std::uint64_t seed = 0;
  int max_witnesses = 32;
  long rejects_per_sample = 512;
  double min_delta = 1e-8;     // centers closer to the boundary are resampled
};

struct HartogsViolation {
  long sample_index = 0;
  std::vector<double> center;
  std::vector<std::complex<double>> line;
  double radius = 0.0;
  double defect = 0.0; // u(z) - mean - tol_scaled, positive
};

struct HartogsReport {
  long centers = 0;
  long tested = 0; // (center, line) pairs
  long violations = 0;
  double worst_defect = 0.0;
  std::vector<HartogsViolation> witnesses;
  HartogsConfig config;
};

// Sub-mean-value test for u = -log dist(z, boundary) over random interior
// centers and complex lines.  Violations falsify pseudoconvexity.
HartogsReport hartogs_check(const DomainSpec& spec, const HartogsConfig& cfg,
                            ExecMode mode = ExecMode::parallel);

} // namespace levilab
