#include "bellkit/serialize.hpp"

#include <cmath>
#include <stdexcept>

namespace bellkit {

Json to_json(const CoincidenceEstimate& e) {
  Json j;
  j["value"] = e.value;
  j["std_error"] = e.std_error;
  j["kind"] = std::string(to_string(e.kind));
  j["n_samples"] = e.n_samples ? Json(*e.n_samples) : Json(nullptr);
  return j;
}

CoincidenceEstimate estimate_from_json(const Json& j) {
  CoincidenceEstimate e;
  e.value = j.at("value").get<double>();
  e.std_error = j.at("std_error").get<double>();
  auto kind = estimate_kind_from_string(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown estimate kind");
  e.kind = *kind;
  if (j.contains("n_samples") && !j.at("n_samples").is_null())
    e.n_samples = j.at("n_samples").get<std::uint64_t>();
  return e;
}

Json to_json(const InequalityReport& r) {
  Json j;
  j["name"] = std::string(to_string(r.name));
  Json terms = Json::array();
  for (const auto& t : r.terms) {
    Json term;
    term["pair"] = t.pair;
    const Json e = to_json(t.estimate);
    for (const auto& [k, v] : e.items()) term[k] = v;
    terms.push_back(std::move(term));
  }
  j["terms"] = std::move(terms);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margin"] = r.margin;
  j["uncertainty"] = r.uncertainty;
  j["sigma_k"] = r.sigma_k;
  j["violated"] = r.violated;
  j["verdict"] = r.violated ? "violated" : "satisfied";
  return j;
}

InequalityReport report_from_json(const Json& j) {
  InequalityReport r;
  auto name = inequality_from_string(j.at("name").get<std::string>());
  if (!name) throw std::invalid_argument("unknown inequality name in report");
  r.name = *name;
  for (const auto& t : j.at("terms")) r.terms.push_back({t.at("pair").get<std::string>(), estimate_from_json(t)});
  r.lhs = j.at("lhs").get<double>();
  r.rhs = j.at("rhs").get<double>();
  r.margin = j.at("margin").get<double>();
  r.uncertainty = j.at("uncertainty").get<double>();
  r.sigma_k = j.at("sigma_k").get<double>();
  r.violated = j.at("violated").get<bool>();
  return r;
}

Json to_json(const Probability& p) {
  if (const auto* d = std::get_if<double>(&p)) return *d;
  return std::get<Rational>(p).str();
}

Probability probability_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw std::invalid_argument("probability must be a number or a \"num/den\" string");
}

Json to_json(const BooleInequality& b, const std::vector<std::string>& names) {
  Json j;
  Json pairs = Json::array();
  for (auto [a, c] : b.pairs) pairs.push_back({a, c});
  j["pairs"] = std::move(pairs);
  j["coefficients"] = b.coefficients;
  j["bound"] = b.bound;
  j["text"] = b.to_string(names);
  return j;
}

BooleInequality boole_from_json(const Json& j) {
  BooleInequality b;
  for (const auto& p : j.at("pairs")) b.pairs.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<std::size_t>());
  b.coefficients = j.at("coefficients").get<std::vector<long long>>();
  b.bound = j.at("bound").get<long long>();
  if (b.coefficients.size() != b.pairs.size())
    throw std::invalid_argument("Boole inequality: pairs and coefficients differ in length");
  return b;
}

Json to_json(const PolytopeInstance& p) {
  Json j;
  j["n_vars"] = p.n_vars;
  Json cons = Json::array();
  for (const auto& c : p.constraints) {
    Json cj;
    cj["pair"] = {c.a, c.b};
    cj["target"] = to_json(c.target);
    cons.push_back(std::move(cj));
  }
  j["constraints"] = std::move(cons);
  j["feasible"] = std::string(to_string(p.feasible));
  j["exact"] = p.exact;
  Json w = Json::object();
  for (const auto& ww : p.witness) w[assignment_string(ww.assignment, p.n_vars)] = to_json(ww.weight);
  j["witness"] = std::move(w);
  j["certificate"] = p.certificate ? to_json(*p.certificate) : Json(nullptr);
  return j;
}

PolytopeInstance polytope_from_json(const Json& j) {
  PolytopeInstance p;
  p.n_vars = j.at("n_vars").get<std::size_t>();
  for (const auto& c : j.at("constraints"))
    p.constraints.push_back({c.at("pair").at(0).get<std::size_t>(),
                             c.at("pair").at(1).get<std::size_t>(),
                             probability_from_json(c.at("target"))});
  if (j.contains("feasible")) {
    const auto f = j.at("feasible").get<std::string>();
    if (f == "feasible")
      p.feasible = Feasibility::feasible;
    else if (f == "infeasible")
      p.feasible = Feasibility::infeasible;
    else if (f == "undecided")
      p.feasible = Feasibility::undecided;
    else
      throw std::invalid_argument("unknown feasibility '" + f + "'");
  }
  p.exact = j.value("exact", false);
  if (j.contains("witness"))
    for (const auto& [k, v] : j.at("witness").items())
      p.witness.push_back({parse_assignment(k), probability_from_json(v)});
  if (j.contains("certificate") && !j.at("certificate").is_null())
    p.certificate = boole_from_json(j.at("certificate"));
  p.validate();
  return p;
}

Json to_json(const ExperimentResult& r, bool with_timing) {
  Json j;
  j["generator"] = r.generator;
  j["seed"] = r.seed;
  j["n_pairs"] = r.n_pairs;
  Json est = Json::array();
  for (const auto& [pair, e] : r.estimates) {
    Json ej;
    ej["pair"] = pair.str();
    const Json ej_est = to_json(e);
    for (const auto& [k, v] : ej_est.items()) ej[k] = v;
    est.push_back(std::move(ej));
  }
  j["estimates"] = std::move(est);
  Json reps = Json::array();
  for (const auto& rep : r.reports) reps.push_back(to_json(rep));
  j["reports"] = std::move(reps);
  if (with_timing) j["wall_seconds"] = r.wall_seconds;
  return j;
}

Json to_json(const SweepTable& t) {
  Json j;
  j["swept_label"] = t.swept_label;
  Json pairs = Json::array();
  for (const auto& p : t.pairs) pairs.push_back(p.str());
  j["pairs"] = std::move(pairs);
  j["empirical"] = t.empirical;
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json rj;
    rj["degrees"] = row.degrees;
    rj["radians"] = degrees_to_radians(row.degrees);
    Json a = Json::array();
    for (const auto& e : row.analytic) a.push_back(to_json(e));
    rj["analytic"] = std::move(a);
    Json ar = Json::array();
    for (const auto& r : row.analytic_reports) ar.push_back(to_json(r));
    rj["analytic_reports"] = std::move(ar);
    if (t.empirical) {
      Json e = Json::array();
      for (const auto& x : row.empirical) e.push_back(to_json(x));
      rj["empirical"] = std::move(e);
      Json er = Json::array();
      for (const auto& r : row.empirical_reports) er.push_back(to_json(r));
      rj["empirical_reports"] = std::move(er);
    }
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  return j;
}

}  // namespace bellkit
