#pragma once

// JSON forms of reports, polytope instances and experiment results.
//
// InequalityReport:
//   {"name": "double-star", "terms": [{"pair": "P=E", "value": 0.146,
//    "std_error": 0, "kind": "analytic", "n_samples": null}, ...],
//    "lhs": ..., "rhs": ..., "margin": ..., "uncertainty": ...,
//    "sigma_k": 3, "violated": true, "verdict": "violated"}
//
// PolytopeInstance:
//   {"n_vars": 3, "constraints": [{"pair": [0, 1], "target": "1/4"}],
//    "feasible": "feasible", "exact": true,
//    "witness": {"++-": "1/4", ...}, "certificate": null | {"pairs": [[0,1],...],
//    "coefficients": [1, 1, 1], "bound": 1, "text": "..."}}
// Exact quantities are strings ("num/den"); float ones are JSON numbers.

#include "json.hpp"

#include "bellkit/inequalities.hpp"
#include "bellkit/montecarlo.hpp"
#include "bellkit/polytope.hpp"

namespace bellkit {

using Json = nlohmann::ordered_json;

Json to_json(const CoincidenceEstimate& e);
CoincidenceEstimate estimate_from_json(const Json& j);

Json to_json(const InequalityReport& r);
InequalityReport report_from_json(const Json& j);

Json to_json(const BooleInequality& b, const std::vector<std::string>& names = {});
BooleInequality boole_from_json(const Json& j);

Json to_json(const PolytopeInstance& p);
PolytopeInstance polytope_from_json(const Json& j);

Json to_json(const Probability& p);
Probability probability_from_json(const Json& j);

/// Wall time is left out unless asked for, so equal plans serialize equally.
Json to_json(const ExperimentResult& r, bool with_timing = false);

Json to_json(const SweepTable& t);

}  // namespace bellkit
