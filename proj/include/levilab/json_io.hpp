#pragma once

#include <string>

#include <json.hpp>

#include "levilab/disc.hpp"
#include "levilab/domain.hpp"
#include "levilab/finite_type.hpp"
#include "levilab/forms.hpp"
#include "levilab/lipschitz.hpp"

namespace levilab {

// Reports use ordered JSON so equal inputs produce byte-identical output.
using Json = nlohmann::ordered_json;

Json domain_to_json(const DomainSpec& spec);
// Files describe smooth domains (name, n, rho, bounding_box, tol_boundary);
// entries with "smooth": false must name a catalog domain.
DomainSpec domain_from_json(const Json& j);
DomainSpec load_domain(const std::string& uri_or_path);

Json disc_to_json(const AnalyticDisc& d);
AnalyticDisc disc_from_json(const Json& j);
AnalyticDisc load_disc(const std::string& path);

Json boundary_point_to_json(const BoundaryPoint& P);
Json form_report_to_json(const FormReport& rep);
Json hartogs_report_to_json(const HartogsReport& rep);
Json containment_to_json(const ContainmentResult& res);
Json disc_search_to_json(const DiscSearchResult& res);
Json sequence_report_to_json(const DiscSequenceReport& rep);
std::string sequence_report_to_csv(const DiscSequenceReport& rep);
Json type_report_to_json(const TypeReport& rep);
Json geometric_type_to_json(const GeometricTypeResult& res);
Json commutator_type_to_json(const CommutatorTypeResult& res);
Json lipschitz_to_json(const LipschitzEstimate& est);

} // namespace levilab
