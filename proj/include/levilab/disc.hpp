#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include "levilab/domain.hpp"
#include "levilab/parallel.hpp"

namespace levilab {

// Polynomial map of the closed unit disc into C^n:
// psi(zeta) = sum_k coeffs[k] * zeta^k.
struct AnalyticDisc {
  std::vector<std::vector<std::complex<double>>> coeffs; // [k][j], k = 0..degree

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
  int n() const { return coeffs.empty() ? 0 : static_cast<int>(coeffs.front().size()); }

  std::vector<std::complex<double>> eval(std::complex<double> zeta) const;
  std::vector<double> eval_real(std::complex<double> zeta) const;
  std::vector<std::complex<double>> center() const { return coeffs.front(); }
  std::vector<std::complex<double>> derivative0() const; // psi'(0)
  bool nonsingular_at0(double tol = 1e-12) const;

  static AnalyticDisc line(int n, int axis, std::complex<double> a0 = 0.0,
                           std::complex<double> a1 = 1.0);
};

// Precompose with zeta -> s * zeta.
AnalyticDisc scale_parameter(const AnalyticDisc& d, std::complex<double> s);
// Translate the image by a constant vector.
AnalyticDisc translate(const AnalyticDisc& d, std::span<const std::complex<double>> offset);

struct DiscTestConfig {
  double delta0 = 0.1;
  long trials = 10000;
  int boundary_samples = 256;
  int interior_rings = 8;
  double tol_membership = 1e-7;
};

// max pairwise distance over the boundary + ring sample grid
double disc_diameter(const AnalyticDisc& d, int boundary_samples = 256, int rings = 8);
std::vector<std::vector<double>> disc_boundary(const AnalyticDisc& d, int K);
std::vector<std::vector<double>> disc_sample_grid(const AnalyticDisc& d, int boundary_samples,
                                                  int rings);

// max(sup_a inf_b, sup_b inf_a) over finite samples
double hausdorff_distance(const std::vector<std::vector<double>>& A,
                          const std::vector<std::vector<double>>& B,
                          ExecMode mode = ExecMode::serial);

// --- containment -----------------------------------------------------------------

enum class ContainmentVariant {
  boundary_in_closure, // psi(bD) in closure  => image in closure
  boundary_in_open,    // psi(bD) in Omega    => image in Omega
  boundary_in_boundary // psi(bD) in bOmega   => image in closure
};

struct ContainmentResult {
  bool premise_holds = false;
  bool conclusion_holds = false;
  std::optional<std::complex<double>> premise_witness;   // boundary parameter failing premise
  std::optional<std::complex<double>> violation_witness; // first interior parameter failing
};

ContainmentResult disc_containment_test(const DomainSpec& spec, const AnalyticDisc& disc,
                                        ContainmentVariant variant,
                                        const DiscTestConfig& cfg = {});

// --- randomized small-disc search ---------------------------------------------------

struct DiscSearchResult {
  bool violation_found = false;
  std::optional<AnalyticDisc> counterexample;
  std::optional<std::complex<double>> witness_zeta;
  long trials_run = 0;
  long premise_failures = 0; // trials where no premise-satisfying disc was generated
  std::uint64_t seed = 0;
};

// Random discs of degree <= 3 with diameter in [delta0/2, delta0] and
// boundary strictly inside Omega; flags any disc whose image exits Omega.
// Deterministic for a fixed seed regardless of thread count.
DiscSearchResult small_disc_search(const DomainSpec& spec, const DiscTestConfig& cfg,
                                   std::uint64_t seed, ExecMode mode = ExecMode::parallel);

// --- pushed-in disc sequences (Kontinuitaetssatz-style data) -------------------------

struct DiscSequenceStep {
  int j = 0;
  std::vector<double> center;
  double delta = 0.0;      // diameter
  double h_forward = 0.0;  // sup over disc samples of dist(., boundary)
  double h_reverse = 0.0;  // sup over a local boundary patch of dist(., disc)
  double push_in = 0.0;            // 1/j
  double shrink = 0.0;             // parameter scale s_j
};

struct DiscSequenceReport {
  std::vector<DiscSequenceStep> steps;
  std::vector<AnalyticDisc> discs;
  bool fitted = false;  // false when J < 2 (insufficient data)
  double m_hat = 0.0;   // slope of log h_forward against log delta
  double fit_residual = 0.0;
  std::vector<std::complex<double>> tau; // limit tangent direction estimate
  double tau_dispersion = 0.0;
};

// phi_j = base(s_j zeta) - (1/j) nu with s_j root-found so the pushed disc
// grazes the boundary from inside.
DiscSequenceReport kontinuitats_sequence(const DomainSpec& spec, const BoundaryPoint& P,
                                         const AnalyticDisc& base, int J,
                                         const DiscTestConfig& cfg = {});

// Normalized phi_j'(0) averaged after phase alignment.
struct TangentDirectionEstimate {
  std::vector<std::complex<double>> tau;
  double dispersion = 0.0;
};
TangentDirectionEstimate limit_tangent_direction(const std::vector<AnalyticDisc>& discs);

// --- harmonic discs -------------------------------------------------------------------

struct HarmonicDisc {
  std::vector<std::vector<std::complex<double>>> boundary; // K samples, each C^n
  std::vector<std::complex<double>> center;                // mean of boundary samples

  // discrete Poisson integral at |zeta| < 1
  std::vector<std::complex<double>> eval(std::complex<double> zeta) const;
};

HarmonicDisc harmonic_disc(const std::vector<std::vector<std::complex<double>>>& curve);

// --- extreme-point witness --------------------------------------------------------------

struct ExtremeWitness {
  bool premise_holds = false; // psi(bD) within boundary tolerance
  bool is_witness = false;    // premise and the open image still touches bOmega
  std::vector<std::complex<double>> touching; // interior parameters on the boundary
};

ExtremeWitness extreme_witness_check(const DomainSpec& spec, const AnalyticDisc& disc,
                                     const DiscTestConfig& cfg = {});

} // namespace levilab
