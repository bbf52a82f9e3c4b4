#pragma once

#include <functional>

namespace levilab {

using Fn1D = std::function<double(double)>;

// j-th forward difference sum_k (-1)^(j-k) C(j,k) g(x + k h).
// Throws Error(domain_error) when a sample point evaluates non-finite.
double forward_difference(const Fn1D& g, double x, double h, int j);

struct LipschitzConfig {
  int levels = 10;              // dyadic h ladder length
  double h0_frac = 1.0 / 64.0;  // largest h as a fraction of the interval width
  int refine = 8;               // extra probes around the running argmax, spacing h/4
  double vanish_tol = 1e-13;    // differences below vanish_tol * scale count as zero
};

struct LipschitzEstimate {
  double alpha = 0.0;
  double residual = 0.0;        // rms deviation of the log-log fit
  bool saturated = false;       // all differences vanished; alpha = j by convention
  int levels_used = 0;
  double max_abs_sample = 0.0;  // boundedness is checked on the sampled set only
  int j = 0;
  int samples = 0;
};

// Least-squares slope of log |Delta_h^j g| against log |h| over dyadic h,
// clamped to (0, j].  The sup over x at each h follows the singular point by
// refining around the previous argmax, so kinks off the coarse grid are
// still seen at scale h.
LipschitzEstimate lipschitz_exponent(const Fn1D& g, double lo, double hi, int j,
                                     int samples, const LipschitzConfig& cfg = {});

} // namespace levilab
