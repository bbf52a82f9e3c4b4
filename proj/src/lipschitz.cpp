#include "levilab/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "levilab/errors.hpp"

namespace levilab {

double forward_difference(const Fn1D& g, double x, double h, int j) {
  if (j < 1) raise(ErrorKind::usage_error, "difference order must be >= 1");
  double acc = 0.0;
  double binom = 1.0;
  for (int k = 0; k <= j; ++k) {
    double sign = ((j - k) % 2 == 0) ? 1.0 : -1.0;
    double v = g(x + k * h);
    if (!std::isfinite(v))
      raise(ErrorKind::domain_error, "sample point outside the function's domain");
    acc += sign * binom * v;
    binom = binom * (j - k) / (k + 1);
  }
  return acc;
}

LipschitzEstimate lipschitz_exponent(const Fn1D& g, double lo, double hi, int j,
                                     int samples, const LipschitzConfig& cfg) {
  if (samples < 32) raise(ErrorKind::usage_error, "need at least 32 samples");
  if (hi <= lo) raise(ErrorKind::usage_error, "empty interval");

  LipschitzEstimate est;
  est.j = j;
  est.samples = samples;

  double width = hi - lo;
  double h0 = width * cfg.h0_frac;

  double scale = 0.0;
  for (int i = 0; i < samples; ++i) {
    double x = lo + width * i / (samples - 1);
    double v = g(x);
    if (!std::isfinite(v))
      raise(ErrorKind::domain_error, "sample point outside the function's domain");
    scale = std::max(scale, std::abs(v));
  }
  est.max_abs_sample = scale;
  double vanish = cfg.vanish_tol * (1.0 + scale);

  std::vector<double> log_h, log_d;
  double argmax = lo;
  for (int level = 0; level < cfg.levels; ++level) {
    double h = h0 / static_cast<double>(1 << level);
    double xmax = hi - j * h;
    double best = 0.0, best_x = argmax;
    auto probe = [&](double x) {
      if (x < lo || x > xmax) return;
      double d = std::abs(forward_difference(g, x, h, j));
      if (d > best) {
        best = d;
        best_x = x;
      }
    };
    for (int i = 0; i < samples; ++i) probe(lo + (xmax - lo) * i / (samples - 1));
    for (int k = -cfg.refine; k <= cfg.refine; ++k) probe(argmax + k * h / 4.0);
    argmax = best_x;
    if (best > vanish) {
      log_h.push_back(std::log(h));
      log_d.push_back(std::log(best));
    }
  }

  est.levels_used = static_cast<int>(log_h.size());
  if (log_h.size() < 2) {
    // every difference vanished at the sampled resolution
    est.saturated = true;
    est.alpha = static_cast<double>(j);
    return est;
  }

  double n = static_cast<double>(log_h.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    sx += log_h[i];
    sy += log_d[i];
    sxx += log_h[i] * log_h[i];
    sxy += log_h[i] * log_d[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) raise(ErrorKind::degenerate_data, "degenerate h ladder");
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < log_h.size(); ++i) {
    double r = log_d[i] - (intercept + slope * log_h[i]);
    rss += r * r;
  }
  est.residual = std::sqrt(rss / n);
  est.alpha = std::clamp(slope, 1e-9, static_cast<double>(j));
  if (slope >= static_cast<double>(j)) est.saturated = true;
  return est;
}

} // namespace levilab
