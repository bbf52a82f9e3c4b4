#include <atomic>
#include <cmath>
#include <random>

#include "levilab/forms.hpp"

namespace levilab {

namespace {

struct ItemResult {
  bool valid = false;
  int tested = 0;
  std::vector<HartogsViolation> violations;
};

} // namespace

HartogsReport hartogs_check(const DomainSpec& spec, const HartogsConfig& cfg, ExecMode mode) {
  const Box& box = spec.bounding_box();
  const int dim = spec.real_dim();
  const int n = spec.n();

  std::vector<ItemResult> results(static_cast<std::size_t>(cfg.samples));

  run_indexed(cfg.samples, mode, [&](long i) {
    ItemResult& res = results[static_cast<std::size_t>(i)];
    std::mt19937_64 rng(item_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // rejection-sample an interior center with a usable boundary distance
    std::vector<double> z(static_cast<std::size_t>(dim));
    double delta = 0.0;
    bool found = false;
    for (long r = 0; r < cfg.rejects_per_sample; ++r) {
      for (int c = 0; c < dim; ++c)
        z[static_cast<std::size_t>(c)] =
            box.ranges[static_cast<std::size_t>(c)][0] +
            unit(rng) * (box.ranges[static_cast<std::size_t>(c)][1] -
                         box.ranges[static_cast<std::size_t>(c)][0]);
      if (!spec.member(z)) continue;
      delta = spec.boundary_distance(z);
      if (delta > cfg.min_delta) {
        found = true;
        break;
      }
    }
    if (!found) return;
    res.valid = true;

    double u_center = -std::log(delta);
    std::vector<double> p(static_cast<std::size_t>(dim));
    for (int l = 0; l < cfg.lines; ++l) {
      // random complex line direction
      std::vector<std::complex<double>> dir(static_cast<std::size_t>(n));
      double norm2 = 0.0;
      for (int j = 0; j < n; ++j) {
        dir[static_cast<std::size_t>(j)] = {gauss(rng), gauss(rng)};
        norm2 += std::norm(dir[static_cast<std::size_t>(j)]);
      }
      if (norm2 == 0.0) continue;
      double inv = 1.0 / std::sqrt(norm2);
      for (auto& d : dir) d *= inv;

      double lr = std::log(cfg.radius_lo_frac) +
                  unit(rng) * (std::log(cfg.radius_hi_frac) - std::log(cfg.radius_lo_frac));
      double radius = delta * std::exp(lr);

      double sum = 0.0;
      bool ok = true;
      for (int k = 0; k < cfg.circle_samples && ok; ++k) {
        double th = 2.0 * M_PI * k / cfg.circle_samples;
        std::complex<double> zeta = std::polar(radius, th);
        for (int j = 0; j < n; ++j) {
          std::complex<double> w = zeta * dir[static_cast<std::size_t>(j)];
          p[static_cast<std::size_t>(2 * j)] = z[static_cast<std::size_t>(2 * j)] + w.real();
          p[static_cast<std::size_t>(2 * j + 1)] =
              z[static_cast<std::size_t>(2 * j + 1)] + w.imag();
        }
        if (!spec.member(p)) {
          ok = false;
          break;
        }
        double dk = spec.boundary_distance(p);
        if (dk <= 0.0) {
          ok = false;
          break;
        }
        sum += -std::log(dk);
      }
      if (!ok) continue;
      ++res.tested;
      double mean = sum / cfg.circle_samples;
      double tol_scaled = cfg.tol * (1.0 + std::abs(u_center));
      double defect = u_center - mean - tol_scaled;
      if (defect > 0.0) {
        HartogsViolation v;
        v.sample_index = i;
        v.center = z;
        v.line = dir;
        v.radius = radius;
        v.defect = defect;
        res.violations.push_back(std::move(v));
      }
    }
  });

  HartogsReport report;
  report.config = cfg;
  long valid = 0;
  for (const ItemResult& r : results) {
    if (!r.valid) continue;
    ++valid;
    report.tested += r.tested;
    for (const HartogsViolation& v : r.violations) {
      ++report.violations;
      report.worst_defect = std::max(report.worst_defect, v.defect);
      if (static_cast<int>(report.witnesses.size()) < cfg.max_witnesses)
        report.witnesses.push_back(v);
    }
  }
  report.centers = valid;
  if (valid < std::max<long>(1, cfg.samples / 100))
    raise(ErrorKind::sampling_error,
          spec.name() + ": only " + std::to_string(valid) + " of " + std::to_string(cfg.samples) +
              " interior centers could be sampled");
  return report;
}

} // namespace levilab
