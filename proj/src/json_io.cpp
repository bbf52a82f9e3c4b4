#include "levilab/json_io.hpp"

#include <fstream>
#include <sstream>

namespace levilab {

namespace {

Json complex_to_json(std::complex<double> c) { return Json::array({c.real(), c.imag()}); }

std::complex<double> complex_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json cvector_to_json(const std::vector<std::complex<double>>& v) {
  Json arr = Json::array();
  for (const auto& c : v) arr.push_back(complex_to_json(c));
  return arr;
}

Json real_matrix_to_json(const Eigen::MatrixXd& m) {
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Json complex_matrix_to_json(const Eigen::MatrixXcd& m) {
  Json data = Json::array();
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) data.push_back(complex_to_json(m(i, j)));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

} // namespace

Json domain_to_json(const DomainSpec& spec) {
  Json j;
  j["name"] = spec.name();
  j["n"] = spec.n();
  j["rho"] = spec.smooth() ? Json(to_string(spec.rho())) : Json(nullptr);
  Json box = Json::array();
  for (const auto& r : spec.bounding_box().ranges) box.push_back(Json::array({r[0], r[1]}));
  j["bounding_box"] = box;
  j["tol_boundary"] = spec.tol_boundary();
  j["smooth"] = spec.smooth();
  return j;
}

DomainSpec domain_from_json(const Json& j) {
  std::string name = j.at("name").get<std::string>();
  bool smooth = j.value("smooth", true);
  if (!smooth) {
    std::map<std::string, double> params;
    if (j.contains("params"))
      for (auto& [k, v] : j.at("params").items()) params[k] = v.get<double>();
    return catalog_domain(name, params);
  }
  int n = j.at("n").get<int>();
  Expr rho = parse_expr(j.at("rho").get<std::string>());
  Box box;
  if (j.contains("bounding_box")) {
    for (const auto& r : j.at("bounding_box"))
      box.ranges.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
  } else {
    box = Box::cube(2 * n, 2.0);
  }
  double tol = j.value("tol_boundary", 1e-9);
  return DomainSpec::smooth_domain(name, n, rho, box, tol);
}

DomainSpec load_domain(const std::string& uri_or_path) {
  if (uri_or_path.rfind("catalog:", 0) == 0) return domain_from_uri(uri_or_path);
  std::ifstream in(uri_or_path);
  if (!in) raise(ErrorKind::usage_error, "cannot open domain spec '" + uri_or_path + "'");
  Json j = Json::parse(in, nullptr, true, true);
  return domain_from_json(j);
}

Json disc_to_json(const AnalyticDisc& d) {
  Json coeffs = Json::array();
  for (const auto& level : d.coeffs) coeffs.push_back(cvector_to_json(level));
  return Json{{"degree", d.degree()}, {"coeffs", coeffs}};
}

AnalyticDisc disc_from_json(const Json& j) {
  AnalyticDisc d;
  for (const auto& level : j.at("coeffs")) {
    std::vector<std::complex<double>> v;
    for (const auto& c : level) v.push_back(complex_from_json(c));
    d.coeffs.push_back(std::move(v));
  }
  if (d.coeffs.empty()) raise(ErrorKind::usage_error, "disc has no coefficients");
  return d;
}

AnalyticDisc load_disc(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorKind::usage_error, "cannot open disc file '" + path + "'");
  Json j = Json::parse(in, nullptr, true, true);
  return disc_from_json(j);
}

Json boundary_point_to_json(const BoundaryPoint& P) {
  return Json{{"coords", P.coords}, {"residual", P.residual}, {"grad_norm", P.grad_norm}};
}

Json form_report_to_json(const FormReport& rep) {
  Json j;
  j["point"] = boundary_point_to_json(rep.P);
  j["hessian_restricted"] = real_matrix_to_json(rep.hessian_restricted);
  j["levi_restricted"] = complex_matrix_to_json(rep.levi_restricted);
  j["hessian_eigenvalues"] = rep.hessian_eigenvalues;
  j["levi_eigenvalues"] = rep.levi_eigenvalues;
  j["flags"] = Json{{"convex", rep.convex},
                    {"strictly_convex", rep.strictly_convex},
                    {"levi_pseudoconvex", rep.levi_pseudoconvex},
                    {"strictly_pseudoconvex", rep.strictly_pseudoconvex}};
  j["tolerances"] = Json{{"tol_eig", rep.tol_eig},
                         {"tol_hessian_scaled", rep.tol_hessian},
                         {"tol_levi_scaled", rep.tol_levi}};
  return j;
}

Json hartogs_report_to_json(const HartogsReport& rep) {
  Json witnesses = Json::array();
  for (const auto& v : rep.witnesses) {
    witnesses.push_back(Json{{"sample_index", v.sample_index},
                             {"center", v.center},
                             {"line", cvector_to_json(v.line)},
                             {"radius", v.radius},
                             {"defect", v.defect}});
  }
  return Json{{"centers", rep.centers},
              {"tested", rep.tested},
              {"violations", rep.violations},
              {"worst_defect", rep.worst_defect},
              {"witnesses", witnesses},
              {"tolerances",
               Json{{"tol", rep.config.tol},
                    {"min_delta", rep.config.min_delta},
                    {"radius_lo_frac", rep.config.radius_lo_frac},
                    {"radius_hi_frac", rep.config.radius_hi_frac}}},
              {"config",
               Json{{"samples", rep.config.samples},
                    {"lines", rep.config.lines},
                    {"circle_samples", rep.config.circle_samples},
                    {"seed", rep.config.seed}}}};
}

namespace {

Json opt_complex(const std::optional<std::complex<double>>& c) {
  return c ? complex_to_json(*c) : Json(nullptr);
}

} // namespace

Json containment_to_json(const ContainmentResult& res) {
  return Json{{"premise_holds", res.premise_holds},
              {"conclusion_holds", res.conclusion_holds},
              {"premise_witness", opt_complex(res.premise_witness)},
              {"violation_witness", opt_complex(res.violation_witness)}};
}

Json disc_search_to_json(const DiscSearchResult& res) {
  Json j;
  j["violation_found"] = res.violation_found;
  j["counterexample"] = res.counterexample ? disc_to_json(*res.counterexample) : Json(nullptr);
  j["witness_zeta"] = opt_complex(res.witness_zeta);
  j["trials_run"] = res.trials_run;
  j["premise_failures"] = res.premise_failures;
  j["seed"] = res.seed;
  return j;
}

Json sequence_report_to_json(const DiscSequenceReport& rep) {
  Json steps = Json::array();
  for (const auto& s : rep.steps) {
    steps.push_back(Json{{"j", s.j},
                         {"center", s.center},
                         {"delta", s.delta},
                         {"h_forward", s.h_forward},
                         {"h_reverse_patch", s.h_reverse},
                         {"push_in", s.push_in},
                         {"shrink", s.shrink}});
  }
  Json j;
  j["steps"] = steps;
  j["fitted"] = rep.fitted;
  if (rep.fitted) {
    j["m_hat"] = rep.m_hat;
    j["fit_residual"] = rep.fit_residual;
  } else {
    j["insufficient"] = true;
  }
  j["tau"] = cvector_to_json(rep.tau);
  j["tau_dispersion"] = rep.tau_dispersion;
  return j;
}

std::string sequence_report_to_csv(const DiscSequenceReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "j,delta_j,h_j\n";
  for (const auto& s : rep.steps) out << s.j << "," << s.delta << "," << s.h_forward << "\n";
  return out.str();
}

Json geometric_type_to_json(const GeometricTypeResult& res) {
  Json j;
  j["order"] = res.order;
  j["saturated"] = res.saturated;
  j["budget_exhausted"] = res.budget_exhausted;
  j["cutoff"] = res.cutoff;
  j["degree_budget"] = res.degree_budget;
  j["witness_disc"] = disc_to_json(res.witness);
  j["tau"] = cvector_to_json(res.tau);
  return j;
}

Json commutator_type_to_json(const CommutatorTypeResult& res) {
  Json j;
  j["order"] = res.order;
  j["saturated"] = res.saturated;
  j["blowup"] = res.blowup;
  j["cutoff"] = res.cutoff;
  j["witness"] = res.witness_label;
  j["pairing_abs"] = res.pairing_abs;
  j["threshold"] = res.threshold;
  j["max_pairing_by_order"] = res.max_pairing_by_order;
  j["frame_dependent"] = res.frame_dependent_note;
  return j;
}

Json type_report_to_json(const TypeReport& rep) {
  Json j;
  j["point"] = boundary_point_to_json(rep.P);
  j["cutoff"] = rep.cutoff;
  j["geometric"] = geometric_type_to_json(rep.geometric);
  j["commutator"] = commutator_type_to_json(rep.commutator);
  j["agree"] = rep.agree;
  j["experimental"] = rep.experimental;
  return j;
}

Json lipschitz_to_json(const LipschitzEstimate& est) {
  return Json{{"alpha", est.alpha},
              {"residual", est.residual},
              {"saturated", est.saturated},
              {"levels_used", est.levels_used},
              {"j", est.j},
              {"samples", est.samples},
              {"max_abs_sample", est.max_abs_sample},
              {"boundedness_note", "bounded on the sampled set only"}};
}

} // namespace levilab
