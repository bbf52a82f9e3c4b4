#include "levilab/disc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace levilab {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::vector<double> to_real(const std::vector<std::complex<double>>& z) {
  std::vector<double> x(2 * z.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    x[2 * j] = z[j].real();
    x[2 * j + 1] = z[j].imag();
  }
  return x;
}

} // namespace

std::vector<std::complex<double>> AnalyticDisc::eval(std::complex<double> zeta) const {
  std::vector<std::complex<double>> v(static_cast<std::size_t>(n()), 0.0);
  // Horner in zeta
  for (int k = degree(); k >= 0; --k)
    for (std::size_t j = 0; j < v.size(); ++j)
      v[j] = v[j] * zeta + coeffs[static_cast<std::size_t>(k)][j];
  return v;
}

std::vector<double> AnalyticDisc::eval_real(std::complex<double> zeta) const {
  return to_real(eval(zeta));
}

std::vector<std::complex<double>> AnalyticDisc::derivative0() const {
  if (degree() < 1) return std::vector<std::complex<double>>(static_cast<std::size_t>(n()), 0.0);
  return coeffs[1];
}

bool AnalyticDisc::nonsingular_at0(double tol) const {
  double s = 0.0;
  for (const auto& c : derivative0()) s += std::norm(c);
  return std::sqrt(s) > tol;
}

AnalyticDisc AnalyticDisc::line(int n, int axis, std::complex<double> a0,
                                std::complex<double> a1) {
  AnalyticDisc d;
  d.coeffs.assign(2, std::vector<std::complex<double>>(static_cast<std::size_t>(n), 0.0));
  d.coeffs[0][static_cast<std::size_t>(axis)] = a0;
  d.coeffs[1][static_cast<std::size_t>(axis)] = a1;
  return d;
}

AnalyticDisc scale_parameter(const AnalyticDisc& d, std::complex<double> s) {
  AnalyticDisc out = d;
  std::complex<double> p = 1.0;
  for (std::size_t k = 0; k < out.coeffs.size(); ++k) {
    for (auto& c : out.coeffs[k]) c *= p;
    p *= s;
  }
  return out;
}

AnalyticDisc translate(const AnalyticDisc& d, std::span<const std::complex<double>> offset) {
  AnalyticDisc out = d;
  for (std::size_t j = 0; j < offset.size() && j < out.coeffs[0].size(); ++j)
    out.coeffs[0][j] += offset[j];
  return out;
}

std::vector<std::vector<double>> disc_boundary(const AnalyticDisc& d, int K) {
  std::vector<std::vector<double>> pts;
  pts.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    pts.push_back(d.eval_real(std::polar(1.0, kTwoPi * k / K)));
  return pts;
}

std::vector<std::vector<double>> disc_sample_grid(const AnalyticDisc& d, int boundary_samples,
                                                  int rings) {
  std::vector<std::vector<double>> pts = disc_boundary(d, boundary_samples);
  pts.push_back(d.eval_real(0.0));
  int per_ring = std::max(8, boundary_samples / 4);
  for (int q = 1; q <= rings; ++q) {
    double r = static_cast<double>(q) / (rings + 1);
    for (int k = 0; k < per_ring; ++k)
      pts.push_back(d.eval_real(std::polar(r, kTwoPi * k / per_ring)));
  }
  return pts;
}

namespace {

double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

// diameter from boundary samples only; for polynomial discs the max pairwise
// distance is attained on the boundary circle
double boundary_diameter(const AnalyticDisc& d, int K) {
  std::vector<std::vector<double>> pts = disc_boundary(d, K);
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, sq_dist(pts[i], pts[j]));
  return std::sqrt(best);
}

} // namespace

double disc_diameter(const AnalyticDisc& d, int boundary_samples, int rings) {
  std::vector<std::vector<double>> pts = disc_sample_grid(d, boundary_samples, rings);
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      best = std::max(best, sq_dist(pts[i], pts[j]));
  return std::sqrt(best);
}

double hausdorff_distance(const std::vector<std::vector<double>>& A,
                          const std::vector<std::vector<double>>& B, ExecMode mode) {
  if (A.empty() || B.empty()) raise(ErrorKind::empty_set, "Hausdorff distance of an empty sample");
  std::vector<double> sup_a(A.size(), 0.0), sup_b(B.size(), 0.0);
  run_indexed(static_cast<long>(A.size()), mode, [&](long i) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& b : B) inf = std::min(inf, sq_dist(A[static_cast<std::size_t>(i)], b));
    sup_a[static_cast<std::size_t>(i)] = inf;
  });
  run_indexed(static_cast<long>(B.size()), mode, [&](long i) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& a : A) inf = std::min(inf, sq_dist(B[static_cast<std::size_t>(i)], a));
    sup_b[static_cast<std::size_t>(i)] = inf;
  });
  double m = 0.0;
  for (double v : sup_a) m = std::max(m, v);
  for (double v : sup_b) m = std::max(m, v);
  return std::sqrt(m);
}

// --- containment ---------------------------------------------------------------------

namespace {

bool premise_in(const DomainSpec& spec, const std::vector<double>& x, ContainmentVariant variant,
                double tol) {
  switch (variant) {
    case ContainmentVariant::boundary_in_closure: return spec.in_closure(x, tol);
    case ContainmentVariant::boundary_in_open: return spec.member(x);
    case ContainmentVariant::boundary_in_boundary: return spec.on_boundary(x, tol);
  }
  return false;
}

} // namespace

ContainmentResult disc_containment_test(const DomainSpec& spec, const AnalyticDisc& disc,
                                        ContainmentVariant variant, const DiscTestConfig& cfg) {
  ContainmentResult res;
  res.premise_holds = true;
  for (int k = 0; k < cfg.boundary_samples; ++k) {
    std::complex<double> zeta = std::polar(1.0, kTwoPi * k / cfg.boundary_samples);
    std::vector<double> x = disc.eval_real(zeta);
    if (!premise_in(spec, x, variant, cfg.tol_membership)) {
      res.premise_holds = false;
      res.premise_witness = zeta;
      break;
    }
  }

  // conclusion scanned center-first so the reported witness is canonical
  res.conclusion_holds = true;
  auto check = [&](std::complex<double> zeta) {
    std::vector<double> x = disc.eval_real(zeta);
    bool inside = variant == ContainmentVariant::boundary_in_open
                      ? spec.member(x)
                      : spec.in_closure(x, cfg.tol_membership);
    if (!inside && res.conclusion_holds) {
      res.conclusion_holds = false;
      res.violation_witness = zeta;
    }
  };
  check(0.0);
  int per_ring = std::max(8, cfg.boundary_samples / 4);
  for (int q = 1; q <= cfg.interior_rings && res.conclusion_holds; ++q) {
    double r = static_cast<double>(q) / (cfg.interior_rings + 1);
    for (int k = 0; k < per_ring && res.conclusion_holds; ++k)
      check(std::polar(r, kTwoPi * k / per_ring));
  }
  return res;
}

// --- randomized search ----------------------------------------------------------------

namespace {

// clearance of x from the boundary, measured into the interior; <= 0 outside
double interior_clearance(const DomainSpec& spec, const std::vector<double>& x) {
  if (!spec.smooth()) {
    if (!spec.member(x)) return -spec.boundary_distance(x);
    return spec.boundary_distance(x);
  }
  double r = spec.rho_at(x);
  double gn = spec.grad_at(x).norm();
  return -r / (gn + 1e-12);
}

struct TrialOutcome {
  bool premise_ok = false;
  bool violation = false;
  AnalyticDisc disc;
  std::complex<double> witness;
};

TrialOutcome run_trial(const DomainSpec& spec, const DiscTestConfig& cfg, std::uint64_t seed) {
  TrialOutcome out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Box& box = spec.bounding_box();
  const int dim = spec.real_dim();
  const int n = spec.n();

  for (int attempt = 0; attempt < 40; ++attempt) {
    // anchor: interior point within delta0 of the boundary
    std::vector<double> anchor(static_cast<std::size_t>(dim));
    bool have_anchor = false;
    for (int r = 0; r < 128 && !have_anchor; ++r) {
      for (int c = 0; c < dim; ++c)
        anchor[static_cast<std::size_t>(c)] =
            box.ranges[static_cast<std::size_t>(c)][0] +
            unit(rng) * (box.ranges[static_cast<std::size_t>(c)][1] -
                         box.ranges[static_cast<std::size_t>(c)][0]);
      if (!spec.member(anchor)) continue;
      double d = spec.boundary_distance(anchor);
      if (d > 1e-9 && d <= cfg.delta0) have_anchor = true;
    }
    if (!have_anchor) continue;

    int degree = 1 + static_cast<int>(rng() % 3);
    AnalyticDisc d;
    d.coeffs.assign(static_cast<std::size_t>(degree) + 1,
                    std::vector<std::complex<double>>(static_cast<std::size_t>(n), 0.0));
    for (int j = 0; j < n; ++j) {
      d.coeffs[0][static_cast<std::size_t>(j)] = {anchor[static_cast<std::size_t>(2 * j)],
                                                  anchor[static_cast<std::size_t>(2 * j + 1)]};
      for (int k = 1; k <= degree; ++k)
        d.coeffs[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)] = {gauss(rng),
                                                                              gauss(rng)};
    }
    double measured = boundary_diameter(d, 48);
    if (measured <= 0.0) continue;
    double target = cfg.delta0 * (0.5 + 0.5 * unit(rng));
    double factor = target / measured;
    for (int k = 1; k <= degree; ++k)
      for (auto& c : d.coeffs[static_cast<std::size_t>(k)]) c *= factor;

    // premise with a clearance margin covering the gap between boundary samples
    double margin = target * 8.0 * std::pow(M_PI * degree / cfg.boundary_samples, 2);
    bool premise = true;
    for (int k = 0; k < cfg.boundary_samples; ++k) {
      std::vector<double> x = d.eval_real(std::polar(1.0, kTwoPi * k / cfg.boundary_samples));
      if (interior_clearance(spec, x) < margin) {
        premise = false;
        break;
      }
    }
    if (!premise) continue;

    out.premise_ok = true;
    out.disc = d;
    auto violated = [&](std::complex<double> zeta) {
      std::vector<double> x = d.eval_real(zeta);
      return !spec.member(x);
    };
    if (violated(0.0)) {
      out.violation = true;
      out.witness = 0.0;
      return out;
    }
    int per_ring = std::max(8, cfg.boundary_samples / 4);
    for (int q = 1; q <= cfg.interior_rings; ++q) {
      double r = static_cast<double>(q) / (cfg.interior_rings + 1);
      for (int k = 0; k < per_ring; ++k) {
        std::complex<double> zeta = std::polar(r, kTwoPi * k / per_ring);
        if (violated(zeta)) {
          out.violation = true;
          out.witness = zeta;
          return out;
        }
      }
    }
    return out;
  }
  return out; // premise_ok == false after all attempts
}

} // namespace

DiscSearchResult small_disc_search(const DomainSpec& spec, const DiscTestConfig& cfg,
                                   std::uint64_t seed, ExecMode mode) {
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(cfg.trials));
  run_indexed(cfg.trials, mode, [&](long i) {
    outcomes[static_cast<std::size_t>(i)] =
        run_trial(spec, cfg, item_seed(seed, static_cast<std::uint64_t>(i)));
  });

  DiscSearchResult res;
  res.seed = seed;
  res.trials_run = cfg.trials;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const TrialOutcome& t = outcomes[i];
    if (!t.premise_ok) {
      ++res.premise_failures;
      continue;
    }
    if (t.violation && !res.violation_found) {
      res.violation_found = true;
      res.counterexample = t.disc;
      res.witness_zeta = t.witness;
    }
  }
  if (res.premise_failures == res.trials_run)
    raise(ErrorKind::sampling_error,
          spec.name() + ": no premise-satisfying discs could be generated");
  return res;
}

// --- pushed-in sequences ------------------------------------------------------------------

DiscSequenceReport kontinuitats_sequence(const DomainSpec& spec, const BoundaryPoint& P,
                                         const AnalyticDisc& base, int J,
                                         const DiscTestConfig& cfg) {
  if (!spec.smooth())
    raise(ErrorKind::not_smooth, spec.name() + ": disc sequences need a defining function");
  Eigen::VectorXd nu = outward_normal(spec, P);
  const int n = spec.n();
  std::vector<std::complex<double>> nu_c(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) nu_c[static_cast<std::size_t>(j)] = {nu[2 * j], nu[2 * j + 1]};

  // worst rho value over a disc sample grid
  const int ksup = std::max(64, cfg.boundary_samples / 4);
  auto sup_rho = [&](const AnalyticDisc& d) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < ksup; ++k)
      worst = std::max(worst, spec.rho_at(d.eval_real(std::polar(1.0, kTwoPi * k / ksup))));
    worst = std::max(worst, spec.rho_at(d.eval_real(0.0)));
    for (int q = 1; q <= 4; ++q)
      for (int k = 0; k < 16; ++k)
        worst = std::max(worst,
                         spec.rho_at(d.eval_real(std::polar(q / 5.0, kTwoPi * k / 16))));
    return worst;
  };

  DiscSequenceReport report;
  double prev_s = 1.0;
  for (int j = 1; j <= J; ++j) {
    double eta = 1.0 / j;
    std::vector<std::complex<double>> offset(nu_c);
    for (auto& c : offset) c *= -eta;

    auto pushed = [&](double s) { return translate(scale_parameter(base, s), offset); };

    // largest parameter scale keeping the pushed disc inside the closure
    double s = prev_s;
    int halvings = 0;
    while (sup_rho(pushed(s)) > 0.0 && halvings < 200) {
      s *= 0.5;
      ++halvings;
    }
    if (halvings == 200)
      raise(ErrorKind::no_convergence, "pushed disc never entered the domain");
    if (halvings == 0) {
      // already inside at the cap; keep the cap
    } else {
      double lo = s, hi = 2.0 * s;
      for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        if (sup_rho(pushed(mid)) <= 0.0)
          lo = mid;
        else
          hi = mid;
      }
      s = 0.95 * lo;
    }
    s = std::min(s, prev_s);
    prev_s = s;

    AnalyticDisc disc = pushed(s);
    DiscSequenceStep step;
    step.j = j;
    step.push_in = eta;
    step.shrink = s;
    step.center = disc.eval_real(0.0);
    step.delta = disc_diameter(disc, 128, 4);

    double h = 0.0;
    for (const auto& pt : disc_sample_grid(disc, 64, 6))
      h = std::max(h, spec.boundary_distance(pt));
    step.h_forward = h;

    // reverse side: boundary patch within 2 * diameter of the disc center
    {
      std::mt19937_64 rng(item_seed(0x6b6f6e74u, static_cast<std::uint64_t>(j)));
      std::normal_distribution<double> gauss(0.0, 1.0);
      std::vector<std::vector<double>> disc_pts = disc_sample_grid(disc, 64, 6);
      double rev = 0.0;
      for (int t = 0; t < 32; ++t) {
        std::vector<double> probe(step.center);
        for (auto& c : probe) c += gauss(rng) * step.delta;
        try {
          BoundaryPoint q = boundary_project(spec, probe);
          double dc = 0.0;
          for (std::size_t i = 0; i < q.coords.size(); ++i) {
            double dd = q.coords[i] - step.center[i];
            dc += dd * dd;
          }
          if (std::sqrt(dc) > 2.0 * step.delta) continue;
          double inf = std::numeric_limits<double>::infinity();
          for (const auto& dp : disc_pts) inf = std::min(inf, sq_dist(dp, q.coords));
          rev = std::max(rev, std::sqrt(inf));
        } catch (const Error&) {
          continue;
        }
      }
      step.h_reverse = rev;
    }

    report.steps.push_back(std::move(step));
    report.discs.push_back(std::move(disc));
  }

  // least squares of log h against log delta; skip the j <= 2 transient when
  // enough steps remain
  std::vector<double> lx, ly;
  for (const DiscSequenceStep& st : report.steps) {
    if (J >= 6 && st.j <= 2) continue;
    if (st.h_forward <= 0.0 || st.delta <= 0.0) continue;
    lx.push_back(std::log(st.delta));
    ly.push_back(std::log(st.h_forward));
  }
  if (lx.size() >= 2) {
    double nn = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    double denom = nn * sxx - sx * sx;
    if (denom > 0) {
      report.fitted = true;
      report.m_hat = (nn * sxy - sx * sy) / denom;
      double intercept = (sy - report.m_hat * sx) / nn;
      double rss = 0.0;
      for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (intercept + report.m_hat * lx[i]);
        rss += r * r;
      }
      report.fit_residual = std::sqrt(rss / nn);
    }
  }

  try {
    TangentDirectionEstimate est = limit_tangent_direction(report.discs);
    report.tau = est.tau;
    report.tau_dispersion = est.dispersion;
  } catch (const Error&) {
    // sequences of singular discs carry no direction estimate
  }
  return report;
}

TangentDirectionEstimate limit_tangent_direction(const std::vector<AnalyticDisc>& discs) {
  std::vector<Eigen::VectorXcd> taus;
  for (const AnalyticDisc& d : discs) {
    auto der = d.derivative0();
    Eigen::VectorXcd t(static_cast<int>(der.size()));
    for (std::size_t j = 0; j < der.size(); ++j) t[static_cast<int>(j)] = der[j];
    double nrm = t.norm();
    if (nrm > 1e-14) taus.push_back(t / nrm);
  }
  if (taus.size() < 3)
    raise(ErrorKind::singular_disc,
          "need at least 3 discs with nonzero derivative at 0 (got " +
              std::to_string(taus.size()) + ")");
  const Eigen::VectorXcd& ref = taus.front();
  Eigen::VectorXcd sum = Eigen::VectorXcd::Zero(ref.size());
  std::vector<Eigen::VectorXcd> aligned;
  for (const auto& t : taus) {
    std::complex<double> ip = ref.dot(t); // conj(ref) . t
    std::complex<double> phase = std::abs(ip) > 1e-14 ? std::conj(ip) / std::abs(ip) : 1.0;
    aligned.push_back(t * phase);
    sum += aligned.back();
  }
  TangentDirectionEstimate est;
  Eigen::VectorXcd mean = sum / static_cast<double>(aligned.size());
  double nrm = mean.norm();
  if (nrm < 1e-14) raise(ErrorKind::singular_disc, "tangent directions cancel out");
  mean /= nrm;
  double disp = 0.0;
  for (const auto& t : aligned) disp = std::max(disp, (t - mean).norm());
  est.tau.assign(mean.data(), mean.data() + mean.size());
  est.dispersion = disp;
  return est;
}

// --- harmonic discs --------------------------------------------------------------------------

HarmonicDisc harmonic_disc(const std::vector<std::vector<std::complex<double>>>& curve) {
  if (curve.size() < 64)
    raise(ErrorKind::usage_error, "need at least 64 boundary samples");
  const std::size_t K = curve.size();
  const std::size_t n = curve.front().size();

  // closedness: the first-to-last gap should look like one more step
  std::vector<double> gaps;
  double scale = 0.0;
  for (std::size_t k = 0; k + 1 < K; ++k) {
    double g = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      g += std::norm(curve[k + 1][j] - curve[k][j]);
      scale = std::max(scale, std::abs(curve[k][j]));
    }
    gaps.push_back(std::sqrt(g));
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  double median = sorted[sorted.size() / 2];
  double wrap = 0.0;
  for (std::size_t j = 0; j < n; ++j) wrap += std::norm(curve.front()[j] - curve.back()[j]);
  wrap = std::sqrt(wrap);
  if (wrap > std::max(8.0 * median, 1e-9 * (1.0 + scale)))
    raise(ErrorKind::curve_not_closed,
          "curve endpoints are " + std::to_string(wrap) + " apart (median step " +
              std::to_string(median) + ")");

  HarmonicDisc h;
  h.boundary = curve;
  h.center.assign(n, 0.0);
  for (const auto& p : curve)
    for (std::size_t j = 0; j < n; ++j) h.center[j] += p[j];
  for (auto& c : h.center) c /= static_cast<double>(K);
  return h;
}

std::vector<std::complex<double>> HarmonicDisc::eval(std::complex<double> zeta) const {
  const std::size_t K = boundary.size();
  const std::size_t n = boundary.front().size();
  double r = std::abs(zeta);
  if (r >= 1.0) raise(ErrorKind::usage_error, "harmonic evaluation needs |zeta| < 1");
  double theta = std::arg(zeta);
  std::vector<std::complex<double>> out(n, 0.0);
  double wsum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    double phi = kTwoPi * static_cast<double>(k) / static_cast<double>(K);
    double kern = (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(theta - phi) + r * r);
    wsum += kern;
    for (std::size_t j = 0; j < n; ++j) out[j] += kern * boundary[k][j];
  }
  for (auto& c : out) c /= wsum;
  return out;
}

// --- extreme witnesses -------------------------------------------------------------------------

ExtremeWitness extreme_witness_check(const DomainSpec& spec, const AnalyticDisc& disc,
                                     const DiscTestConfig& cfg) {
  ExtremeWitness res;
  res.premise_holds = true;
  for (int k = 0; k < cfg.boundary_samples; ++k) {
    std::vector<double> x = disc.eval_real(std::polar(1.0, kTwoPi * k / cfg.boundary_samples));
    if (!spec.on_boundary(x, cfg.tol_membership)) {
      res.premise_holds = false;
      return res;
    }
  }
  auto probe = [&](std::complex<double> zeta) {
    if (static_cast<int>(res.touching.size()) >= 64) return;
    std::vector<double> x = disc.eval_real(zeta);
    if (spec.on_boundary(x, cfg.tol_membership)) res.touching.push_back(zeta);
  };
  probe(0.0);
  int per_ring = std::max(8, cfg.boundary_samples / 4);
  for (int q = 1; q <= cfg.interior_rings; ++q) {
    double r = static_cast<double>(q) / (cfg.interior_rings + 1);
    for (int k = 0; k < per_ring; ++k) probe(std::polar(r, kTwoPi * k / per_ring));
  }
  res.is_witness = res.premise_holds && !res.touching.empty();
  return res;
}

} // namespace levilab
