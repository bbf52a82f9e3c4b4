#include "levilab/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "levilab/json_io.hpp"
#include "levilab/parallel.hpp"

namespace levilab {

namespace {

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      raise(ErrorKind::usage_error, "malformed coordinate '" + item + "' in --point");
    }
  }
  if (v.empty()) raise(ErrorKind::usage_error, "--point needs comma-separated coordinates");
  return v;
}

std::string complex_point_string(std::span<const double> x) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (std::size_t j = 0; 2 * j + 1 < x.size(); ++j) {
    if (j) out << ", ";
    out << x[2 * j] << (x[2 * j + 1] >= 0 ? "+" : "") << x[2 * j + 1] << "i";
  }
  out << ")";
  return out.str();
}

// Example 3's boundary curve: z1 constant, z2 tracing the right edge and the
// top edge of the square of side 1+eps (the top edge is retraced).
std::vector<std::vector<std::complex<double>>> example3_curve(double eps, int K) {
  std::vector<std::vector<std::complex<double>>> curve;
  curve.reserve(static_cast<std::size_t>(K));
  double a = 1.0 + eps;
  for (int k = 0; k < K; ++k) {
    double t = 4.0 * k / K;
    std::complex<double> z2;
    if (t <= 1.0)
      z2 = {a, a * t};
    else if (t <= 2.0)
      z2 = {a * (2.0 - t), a};
    else if (t <= 3.0)
      z2 = {a * (t - 2.0), a};
    else
      z2 = {a, a * (4.0 - t)};
    curve.push_back({std::complex<double>(2.0 - eps, 0.0), z2});
  }
  return curve;
}

struct ReportSink {
  std::string verb;
  std::vector<std::string> argv;
  bool timing = false;
  std::string out_path;
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  Json diagnostics = Json{{"warnings", Json::array()}, {"notes", Json::array()}};

  void warn(const std::string& msg) { diagnostics["warnings"].push_back(msg); }
  void note(const std::string& msg) { diagnostics["notes"].push_back(msg); }

  int emit(std::ostream& out, const Json& results, const Json& tolerances, int exit_code) {
    Json rep;
    rep["schema_version"] = "1";
    rep["command"] = Json{{"verb", verb}, {"argv", argv}};
    rep["results"] = results;
    rep["diagnostics"] = diagnostics;
    rep["tolerances"] = tolerances;
    rep["exit_code"] = exit_code;
    if (timing) {
      auto us = std::chrono::duration_cast<std::chrono::microseconds>(
                    std::chrono::steady_clock::now() - started)
                    .count();
      rep["timing_us"] = us;
    }
    std::string text = rep.dump(2);
    text.push_back('\n');
    if (!out_path.empty()) {
      std::ofstream f(out_path);
      if (!f) raise(ErrorKind::usage_error, "cannot write report to '" + out_path + "'");
      f << text;
    } else {
      out << text;
    }
    return exit_code;
  }
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"levilab: boundary geometry of smoothly bounded domains in C^n"};
  app.require_subcommand(1);

  std::string input, point_text, out_path, csv_path, expr_text, variant_text = "boundary_in_open";
  std::string disc_path;
  std::uint64_t seed = 0;
  int cutoff = 8, degree = 6, J = 20, jorder = 2, samples = 25000, lines = 4, lsamples = 4097;
  long trials = 10000;
  double delta0 = 0.1, tol_eig = 1e-8, eps = 0.01, lo = -1.0, hi = 1.0, hartogs_tol = 1e-7;
  int curve_K = 4096;
  bool timing = false, serial = false;

  auto add_common = [&](CLI::App* cmd, bool needs_input) {
    if (needs_input)
      cmd->add_option("input", input, "domain: catalog:<name>[?k=..&..] or a JSON spec path")
          ->required();
    cmd->add_option("--out", out_path, "write the JSON report to this path");
    cmd->add_flag("--timing", timing, "include wall-clock timing in the report");
    cmd->add_option("--seed", seed, "RNG seed (reports are reproducible per seed)");
    cmd->add_flag("--serial", serial, "run sampling kernels on one thread (reference path)");
  };

  CLI::App* analyze = app.add_subcommand("analyze", "classify convexity/pseudoconvexity at a point");
  add_common(analyze, true);
  analyze->add_option("--point", point_text, "boundary point x1,..,x2n (projected if off-surface)")
      ->required();
  analyze->add_option("--tol-eig", tol_eig, "eigenvalue sign tolerance");

  CLI::App* type = app.add_subcommand("type", "geometric and commutator type with agreement check");
  add_common(type, true);
  type->add_option("--point", point_text)->required();
  type->add_option("--cutoff", cutoff, "saturation cutoff M");
  type->add_option("--degree", degree, "polynomial degree budget for witness discs");
  type->add_option("--recheck-disc", disc_path, "re-check a witness disc JSON via contact order");

  CLI::App* disc_test = app.add_subcommand("disc-test", "randomized small-disc containment search");
  add_common(disc_test, true);
  disc_test->add_option("--delta0", delta0, "maximum disc diameter");
  disc_test->add_option("--trials", trials, "number of random discs");
  disc_test->add_option("--disc", disc_path, "test one disc JSON instead of searching");
  disc_test->add_option("--variant", variant_text,
                        "containment variant for --disc: boundary_in_closure | boundary_in_open "
                        "| boundary_in_boundary");

  CLI::App* hartogs = app.add_subcommand("hartogs", "sampled sub-mean-value check of -log dist");
  add_common(hartogs, true);
  hartogs->add_option("--samples", samples, "interior centers");
  hartogs->add_option("--lines", lines, "complex lines per center");
  hartogs->add_option("--tol", hartogs_tol, "sub-mean-value tolerance");

  CLI::App* lipschitz = app.add_subcommand("lipschitz", "Hoelder exponent from dyadic differences");
  add_common(lipschitz, false);
  lipschitz->add_option("--expr", expr_text, "expression in x1 to estimate")->required();
  lipschitz->add_option("--interval", point_text, "lo,hi (default -1,1)");
  lipschitz->add_option("--j", jorder, "difference order");
  lipschitz->add_option("--samples", lsamples, "grid size");

  CLI::App* sequence = app.add_subcommand("sequence", "pushed-in disc sequence and exponent fit");
  add_common(sequence, true);
  sequence->add_option("--point", point_text)->required();
  sequence->add_option("--disc", disc_path, "base disc JSON (default: tangent coordinate disc)");
  sequence->add_option("--J", J, "sequence length");
  sequence->add_option("--csv", csv_path, "write j,delta_j,h_j rows to this path");

  CLI::App* example = app.add_subcommand("example", "run a worked example end to end");
  add_common(example, false);
  std::string example_name;
  example->add_option("name", example_name, "example1 | example2 | example3")->required();
  example->add_option("--eps", eps, "example3 corner offset");
  example->add_option("--curve-samples", curve_K, "example3 boundary samples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream dummy;
    int code = app.exit(e, e.get_exit_code() == 0 ? out : dummy, err);
    return code == 0 ? 0 : 2;
  }

  ExecMode mode = serial ? ExecMode::serial : ExecMode::parallel;

  ReportSink sink;
  sink.verb = app.get_subcommands().front()->get_name();
  sink.argv = args;
  sink.timing = timing;
  sink.out_path = out_path;

  try {
    if (analyze->parsed()) {
      DomainSpec spec = load_domain(input);
      BoundaryPoint P = make_boundary_point(spec, parse_point(point_text));
      FormReport rep = classify_point(spec, P, tol_eig);
      sink.note("point " + complex_point_string(P.coords));
      Json results = form_report_to_json(rep);
      results["domain"] = domain_to_json(spec);
      Json tols{{"tol_eig", rep.tol_eig},
                {"tol_hessian_scaled", rep.tol_hessian},
                {"tol_levi_scaled", rep.tol_levi},
                {"tol_boundary", spec.tol_boundary()}};
      return sink.emit(out, results, tols, 0);
    }

    if (type->parsed()) {
      DomainSpec spec = load_domain(input);
      BoundaryPoint P = make_boundary_point(spec, parse_point(point_text));
      if (!disc_path.empty()) {
        AnalyticDisc d = load_disc(disc_path);
        ContactOrder co = contact_order(spec, d, cutoff);
        Json results{{"contact_order", co.order}, {"saturated", co.saturated},
                     {"disc", disc_to_json(d)}};
        Json tols{{"coeff_tol", 1e-8}, {"cutoff", cutoff}};
        return sink.emit(out, results, tols, 0);
      }
      TypeReport rep = bloom_graham_check(spec, P, degree, cutoff);
      if (rep.experimental)
        sink.note("n > 2: geometric/commutator agreement is experimental");
      if (rep.commutator.blowup)
        sink.warn("commutator enumeration hit the node budget; result is a lower bound");
      Json results = type_report_to_json(rep);
      results["domain"] = domain_to_json(spec);
      Json tols{{"coeff_tol", 1e-8},
                {"pairing_threshold", rep.commutator.threshold},
                {"cutoff", cutoff},
                {"degree_budget", degree}};
      bool definite_disagree = !rep.agree && !rep.geometric.saturated &&
                               !rep.commutator.saturated && !rep.commutator.blowup &&
                               !rep.experimental;
      return sink.emit(out, results, tols, definite_disagree ? 1 : 0);
    }

    if (disc_test->parsed()) {
      DomainSpec spec = load_domain(input);
      DiscTestConfig cfg;
      cfg.delta0 = delta0;
      cfg.trials = trials;
      if (!disc_path.empty()) {
        AnalyticDisc d = load_disc(disc_path);
        ContainmentVariant variant;
        if (variant_text == "boundary_in_closure")
          variant = ContainmentVariant::boundary_in_closure;
        else if (variant_text == "boundary_in_open")
          variant = ContainmentVariant::boundary_in_open;
        else if (variant_text == "boundary_in_boundary")
          variant = ContainmentVariant::boundary_in_boundary;
        else
          raise(ErrorKind::usage_error, "unknown containment variant '" + variant_text + "'");
        ContainmentResult res = disc_containment_test(spec, d, variant, cfg);
        Json results = containment_to_json(res);
        results["disc"] = disc_to_json(d);
        results["variant"] = variant_text;
        Json tols{{"tol_membership", cfg.tol_membership}};
        bool violated = res.premise_holds && !res.conclusion_holds;
        return sink.emit(out, results, tols, violated ? 1 : 0);
      }
      DiscSearchResult res = small_disc_search(spec, cfg, seed, mode);
      Json results = disc_search_to_json(res);
      results["domain"] = domain_to_json(spec);
      Json tols{{"tol_membership", cfg.tol_membership}, {"delta0", cfg.delta0}};
      return sink.emit(out, results, tols, res.violation_found ? 1 : 0);
    }

    if (hartogs->parsed()) {
      DomainSpec spec = load_domain(input);
      HartogsConfig cfg;
      cfg.samples = samples;
      cfg.lines = lines;
      cfg.seed = seed;
      cfg.tol = hartogs_tol;
      HartogsReport rep = hartogs_check(spec, cfg, mode);
      Json results = hartogs_report_to_json(rep);
      results["domain"] = domain_to_json(spec);
      Json tols = results["tolerances"];
      return sink.emit(out, results, tols, rep.violations > 0 ? 1 : 0);
    }

    if (lipschitz->parsed()) {
      Expr e = parse_expr(expr_text);
      if (max_var_index(e) > 0)
        raise(ErrorKind::usage_error, "lipschitz expressions use the single variable x1");
      if (!point_text.empty()) {
        std::vector<double> iv = parse_point(point_text);
        if (iv.size() != 2) raise(ErrorKind::usage_error, "--interval needs lo,hi");
        lo = iv[0];
        hi = iv[1];
      }
      Fn1D g = [&e](double x) {
        double xs[1] = {x};
        return eval(e, xs);
      };
      LipschitzEstimate est = lipschitz_exponent(g, lo, hi, jorder, lsamples);
      sink.note("boundedness verified on the sampled set only");
      Json results = lipschitz_to_json(est);
      results["expr"] = expr_text;
      results["interval"] = Json::array({lo, hi});
      Json tols{{"vanish_tol", LipschitzConfig{}.vanish_tol}};
      return sink.emit(out, results, tols, 0);
    }

    if (sequence->parsed()) {
      DomainSpec spec = load_domain(input);
      BoundaryPoint P = make_boundary_point(spec, parse_point(point_text));
      AnalyticDisc base;
      if (!disc_path.empty()) {
        base = load_disc(disc_path);
      } else {
        // tangent coordinate disc through P along the first complex
        // tangential direction
        NormalizedFrame frame = normalize_coordinates(spec, P);
        std::vector<std::complex<double>> tau_w(static_cast<std::size_t>(spec.n()), 0.0);
        tau_w[0] = 1.0;
        auto tau = frame.vector_from_normalized(tau_w);
        double nn = 0.0;
        for (auto& c : tau) nn += std::norm(c);
        nn = std::sqrt(nn);
        base.coeffs.assign(2, std::vector<std::complex<double>>(
                                  static_cast<std::size_t>(spec.n()), 0.0));
        for (int j = 0; j < spec.n(); ++j) {
          base.coeffs[0][static_cast<std::size_t>(j)] =
              std::complex<double>(P.coords[static_cast<std::size_t>(2 * j)],
                                   P.coords[static_cast<std::size_t>(2 * j + 1)]);
          base.coeffs[1][static_cast<std::size_t>(j)] = tau[static_cast<std::size_t>(j)] / nn;
        }
      }
      DiscSequenceReport rep = kontinuitats_sequence(spec, P, base, J);
      if (!rep.fitted) sink.warn("insufficient steps for an exponent fit");
      if (!csv_path.empty()) {
        std::ofstream f(csv_path);
        if (!f) raise(ErrorKind::usage_error, "cannot write CSV to '" + csv_path + "'");
        f << sequence_report_to_csv(rep);
      }
      Json results = sequence_report_to_json(rep);
      results["domain"] = domain_to_json(spec);
      results["base_disc"] = disc_to_json(base);
      Json tols{{"tol_boundary", spec.tol_boundary()}};
      return sink.emit(out, results, tols, 0);
    }

    if (example->parsed()) {
      if (example_name == "example1" || example_name == "example2") {
        DomainSpec spec = catalog_domain(example_name == "example1" ? "annulus_times_disc"
                                                                    : "example2_nonpseudoconvex");
        AnalyticDisc d = AnalyticDisc::line(2, 0); // zeta -> (zeta, 0)
        ContainmentResult res =
            disc_containment_test(spec, d, ContainmentVariant::boundary_in_open);
        bool expected = res.premise_holds && !res.conclusion_holds && res.violation_witness &&
                        std::abs(*res.violation_witness) < 1e-12;
        Json results;
        results["domain"] = domain_to_json(spec);
        results["disc"] = disc_to_json(d);
        results["containment"] = containment_to_json(res);
        results["expected_outcome"] = "boundary lies in the domain, the disc exits at zeta = 0";
        results["reproduced"] = expected;
        return sink.emit(out, results, Json{{"tol_membership", DiscTestConfig{}.tol_membership}},
                         expected ? 0 : 1);
      }
      if (example_name == "example3") {
        DomainSpec spec = catalog_domain("square_frame_times_disc");
        auto curve = example3_curve(eps, curve_K);
        HarmonicDisc h = harmonic_disc(curve);
        std::complex<double> expected1(2.0 - eps, 0.0);
        std::complex<double> expected2(0.75 * (1.0 + eps), 0.75 * (1.0 + eps));
        double err1 = std::abs(h.center[0] - expected1);
        double err2 = std::abs(h.center[1] - expected2);
        std::vector<double> center_real = {h.center[0].real(), h.center[0].imag(),
                                           h.center[1].real(), h.center[1].imag()};
        bool outside = !spec.member(center_real);
        bool pass = err1 <= 1e-6 && err2 <= 1e-6 && outside;
        Json results;
        results["domain"] = domain_to_json(spec);
        results["eps"] = eps;
        results["curve_samples"] = curve_K;
        results["center"] = Json::array({Json::array({h.center[0].real(), h.center[0].imag()}),
                                         Json::array({h.center[1].real(), h.center[1].imag()})});
        results["closed_form"] =
            Json::array({Json::array({expected1.real(), expected1.imag()}),
                         Json::array({expected2.real(), expected2.imag()})});
        results["center_error"] = Json::array({err1, err2});
        results["center_outside_domain"] = outside;
        results["reproduced"] = pass;
        return sink.emit(out, results, Json{{"center_tol", 1e-6}}, pass ? 0 : 1);
      }
      raise(ErrorKind::unknown_name, "unknown example '" + example_name + "'");
    }

    raise(ErrorKind::usage_error, "no subcommand");
  } catch (const Error& e) {
    sink.warn(std::string(error_kind_name(e.kind())) + ": " + e.what());
    int code = e.kind() == ErrorKind::usage_error || e.kind() == ErrorKind::parse_error ? 2 : 3;
    Json results = Json{{"error", Json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
    return sink.emit(out, results, Json::object(), code);
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

} // namespace levilab
