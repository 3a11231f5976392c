#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bellkit/polytope.hpp"
#include "bellkit/relativity.hpp"
#include "bellkit/serialize.hpp"
#include "cli.hpp"

namespace py = pybind11;
using namespace bellkit;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string dump(const Json& j) { return j.dump(); }

Probability to_probability(const py::handle& h, bool exact) {
  if (py::isinstance<py::str>(h)) {
    auto r = parse_rational(h.cast<std::string>());
    return exact ? Probability(r) : Probability(r.convert_to<double>());
  }
  const double v = h.cast<double>();
  if (!exact) return v;
  // Floats go through their shortest decimal form so 0.1 means 1/10.
  return parse_rational(py::str(h).cast<std::string>());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "bellkit native core";

  m.def("singlet_coincidence", [](double a_deg, double b_deg) {
    return singlet_coincidence(MeasurementSetting::from_degrees("E", a_deg),
                               MeasurementSetting::from_degrees("P", b_deg)).value;
  }, py::arg("a_deg"), py::arg("b_deg"));

  m.def("malus", [](double theta) { return malus_same_prep_coincidence(theta).value; }, py::arg("theta"));

  m.def("evaluate_inequality", [](const std::string& name, const std::vector<double>& probs, double sigma_k) {
    const auto which = inequality_from_string(name);
    if (!which) throw py::value_error("unknown inequality '" + name + "'");
    const auto pairs = default_term_pairs(*which);
    if (probs.size() != pairs.size()) throw py::value_error("wrong number of probabilities for " + name);
    std::vector<InequalityTerm> terms;
    for (std::size_t i = 0; i < probs.size(); ++i)
      terms.push_back({pairs[i], CoincidenceEstimate::analytic(probs[i])});
    return dump(to_json(evaluate(*which, std::move(terms), sigma_k)));
  }, py::arg("name"), py::arg("probabilities"), py::arg("sigma_k") = kDefaultSigmaK);

  m.def("check_local_polytope", [](std::size_t n_vars, const py::list& constraints, bool exact) {
    PolytopeInstance inst;
    inst.n_vars = n_vars;
    for (const auto& item : constraints) {
      const auto t = item.cast<py::tuple>();
      if (t.size() != 3) throw py::value_error("constraints are (i, j, target) triples");
      inst.constraints.push_back({t[0].cast<std::size_t>(), t[1].cast<std::size_t>(), to_probability(t[2], exact)});
    }
    return dump(to_json(check_local_polytope(std::move(inst))));
  }, py::arg("n_vars"), py::arg("constraints"), py::arg("exact") = true);

  m.def("enumerate_boole_facets", [](std::size_t n_vars, const std::vector<VarPair>& pairs) {
    Json arr = Json::array();
    for (const auto& f : enumerate_boole_facets(n_vars, pairs)) arr.push_back(to_json(f));
    return dump(arr);
  }, py::arg("n_vars"), py::arg("pairs"));

  m.def("run_experiment", [](const std::string& plan_text) {
    std::istringstream in(plan_text);
    const auto plan = parse_plan(in);
    py::gil_scoped_release release;
    return dump(to_json(run_experiment(plan)));
  }, py::arg("plan_text"));

  m.def("observer_ordering", [](double beta, std::pair<double, double> e, std::pair<double, double> p) {
    const SpacetimeEvent ev_e{e.first, e.second, Station::E, 0};
    const SpacetimeEvent ev_p{p.first, p.second, Station::P, 0};
    const auto r = observer_ordering(LorentzObserver(beta), ev_e, ev_p);
    return std::make_pair(std::string(to_string(r.order)), r.frame_invariant);
  }, py::arg("beta"), py::arg("e_event"), py::arg("p_event"));

  m.def("reproduce_paper", [](std::uint64_t seed, std::size_t n_pairs, unsigned threads) {
    std::vector<cli::ScenarioCheck> checks;
    {
      py::gil_scoped_release release;
      checks = cli::reproduce_paper({seed, n_pairs, threads});
    }
    Json arr = Json::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    return dump(arr);
  }, py::arg("seed") = kDefaultSeed, py::arg("n_pairs") = kDefaultPairs, py::arg("threads") = 1);

  m.def("cli", [](std::vector<std::string> args) {
    args.insert(args.begin(), "bellkit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return py::make_tuple(code, out.str(), err.str());
  }, py::arg("args"));

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const std::invalid_argument& e) {
      PyErr_SetString(PyExc_ValueError, e.what());
    } catch (const std::out_of_range& e) {
      PyErr_SetString(PyExc_IndexError, e.what());
    }
  });
}
