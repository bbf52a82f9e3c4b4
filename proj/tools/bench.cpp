// Timing comparison of the sampling kernels: serial reference loop vs the
// OpenMP path.  Both produce identical reports for a fixed seed; the tests
// assert that, this tool just measures the speedup.

#include <chrono>
#include <cstdio>

#include "levilab/disc.hpp"
#include "levilab/forms.hpp"
#include "levilab/parallel.hpp"

using namespace levilab;

namespace {

template <class Fn>
double time_ms(Fn&& fn) {
  auto t0 = std::chrono::steady_clock::now();
  fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-28s %10.1f ms %10.1f ms %7.2fx\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms);
}

} // namespace

int main() {
  std::printf("workers: %d\n", worker_count());
  std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

  {
    DomainSpec ball = catalog_domain("ball");
    HartogsConfig cfg;
    cfg.samples = 4000;
    cfg.lines = 2;
    double s = time_ms([&] { hartogs_check(ball, cfg, ExecMode::serial); });
    double p = time_ms([&] { hartogs_check(ball, cfg, ExecMode::parallel); });
    row("hartogs_check(ball)", s, p);
  }
  {
    DomainSpec dom = catalog_domain("example2_nonpseudoconvex");
    HartogsConfig cfg;
    cfg.samples = 20000;
    cfg.lines = 4;
    double s = time_ms([&] { hartogs_check(dom, cfg, ExecMode::serial); });
    double p = time_ms([&] { hartogs_check(dom, cfg, ExecMode::parallel); });
    row("hartogs_check(example2)", s, p);
  }
  {
    DomainSpec ball = catalog_domain("ball");
    DiscTestConfig cfg;
    cfg.trials = 2000;
    double s = time_ms([&] { small_disc_search(ball, cfg, 7, ExecMode::serial); });
    double p = time_ms([&] { small_disc_search(ball, cfg, 7, ExecMode::parallel); });
    row("small_disc_search(ball)", s, p);
  }
  {
    AnalyticDisc a = AnalyticDisc::line(2, 0);
    AnalyticDisc b = AnalyticDisc::line(2, 0, 0.0, 0.9);
    auto A = disc_boundary(a, 2048);
    auto B = disc_boundary(b, 2048);
    double s = time_ms([&] { hausdorff_distance(A, B, ExecMode::serial); });
    double p = time_ms([&] { hausdorff_distance(A, B, ExecMode::parallel); });
    row("hausdorff_distance(2048^2)", s, p);
  }
  return 0;
}
