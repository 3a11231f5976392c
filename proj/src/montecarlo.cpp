#include "bellkit/montecarlo.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace bellkit {

namespace {

const std::set<std::string, std::less<>> kGenerators = {"qm-realist", "qm-realist-assembled",
                                                        "lhv", "nonlocal-eacp"};

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    auto item = trim(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
    if (!item.empty()) out.push_back(std::move(item));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("plan: bad value '" + text + "' for " + key);
  return value;
}

std::vector<MeasurementSetting> parse_settings(const std::string& text) {
  std::vector<MeasurementSetting> out;
  for (const auto& item : split(text, ',')) {
    auto colon = item.rfind(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("plan: setting '" + item + "' must look like LABEL:DEGREES");
    auto label = trim(std::string_view(item).substr(0, colon));
    auto deg = trim(std::string_view(item).substr(colon + 1));
    if (!deg.empty() && deg.front() == '+') deg.erase(0, 1);
    out.push_back(MeasurementSetting::from_degrees(label, parse_number<double>(deg, "setting")));
  }
  return out;
}

// Comparison pairs followed by any further pairs the inequalities need.
std::vector<LabelPair> experiment_pairs(const ExperimentPlan& plan) {
  std::vector<LabelPair> pairs = plan.comparisons;
  for (auto name : plan.inequalities)
    for (auto& p : inequality_pairs(name, plan.panel))
      if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) pairs.push_back(p);
  return pairs;
}

CounterfactualRun generate_plain(const ExperimentPlan& plan, std::size_t n, Rng& rng,
                                 std::size_t start) {
  const auto& gen = plan.generator;
  if (gen.name == "qm-realist")
    return generate_qm_realist_run(
        plan.panel, n, realist_variant_from_string(gen.param("variant", "measured-E")),
        realist_mode_from_string(gen.param("mode", "conditional-independence")), rng, start);
  if (gen.name == "lhv") return generate_lhv_run(plan.panel, n, gen.param("family", "sign"), rng, start);
  if (gen.name == "nonlocal-eacp") return generate_nonlocal_eacp_run(plan.panel, n, rng, start);
  throw std::invalid_argument("generator '" + gen.name + "' has no single record stream");
}

struct ChunkCounts {
  std::vector<std::uint64_t> agreements;
  std::vector<EstimateKind> kinds;
};

EstimateKind kind_of(const CounterfactualRun& run, std::size_t a, std::size_t b) {
  return run.measured(a) && run.measured(b) ? EstimateKind::empirical : EstimateKind::inferred;
}

class ChunkRunner {
public:
  ChunkRunner(const ExperimentPlan& plan, std::vector<LabelPair> pairs)
      : plan_(plan), pairs_(std::move(pairs)) {
    for (const auto& p : pairs_)
      columns_.emplace_back(plan.panel.column(p.first), plan.panel.column(p.second));
  }

  ChunkCounts operator()(std::size_t chunk) const {
    const std::size_t start = chunk * plan_.chunk_size;
    const std::size_t n = std::min(plan_.chunk_size, plan_.n_pairs - start);
    const auto& gen = plan_.generator;
    ChunkCounts out;

    if (gen.name == "qm-realist-assembled") {
      Rng pe_rng = Rng::substream(plan_.seed, 2 * chunk);
      Rng ep_rng = Rng::substream(plan_.seed, 2 * chunk + 1);
      const auto pe = generate_qm_realist_run(plan_.panel, n, RealistVariant::measured_e,
                                              RealistMode::conditional_independence, pe_rng, start);
      const auto ep = generate_qm_realist_run(plan_.panel, n, RealistVariant::measured_e,
                                              RealistMode::lemma_exact, ep_rng, start);
      for (auto [a, b] : columns_) {
        const bool p_anchored =
            plan_.panel.station(a) == Station::P || plan_.panel.station(b) == Station::P;
        const auto& run = p_anchored ? pe : ep;
        out.agreements.push_back(agreement_count(run, a, b));
        out.kinds.push_back(kind_of(run, a, b));
      }
      return out;
    }

    Rng rng = Rng::substream(plan_.seed, chunk);
    const auto run = generate_plain(plan_, n, rng, start);
    for (auto [a, b] : columns_) {
      out.agreements.push_back(agreement_count(run, a, b));
      out.kinds.push_back(kind_of(run, a, b));
    }
    return out;
  }

private:
  const ExperimentPlan& plan_;
  std::vector<LabelPair> pairs_;
  std::vector<std::pair<std::size_t, std::size_t>> columns_;
};

}  // namespace

std::string GeneratorSpec::param(const std::string& key, const std::string& fallback) const {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void ExperimentPlan::validate() const {
  if (n_pairs == 0) throw std::invalid_argument("plan: n_pairs must be at least 1");
  if (chunk_size == 0) throw std::invalid_argument("plan: chunk_size must be at least 1");
  if (!(sigma_k > 0) || !std::isfinite(sigma_k))
    throw std::invalid_argument("plan: sigma_k must be positive");
  if (!kGenerators.contains(generator.name))
    throw std::invalid_argument("plan: unknown generator '" + generator.name + "'");
  panel.validate();

  std::set<std::string> allowed;
  if (generator.name == "qm-realist") allowed = {"mode", "variant"};
  if (generator.name == "lhv") allowed = {"family"};
  for (const auto& [k, v] : generator.params)
    if (!allowed.contains(k))
      throw std::invalid_argument("plan: generator '" + generator.name +
                                  "' takes no parameter '" + k + "'");
  if (generator.name == "qm-realist") {
    realist_mode_from_string(generator.param("mode", "conditional-independence"));
    realist_variant_from_string(generator.param("variant", "measured-E"));
  }
  if (generator.name == "lhv") LhvRegistry::instance().get(generator.param("family", "sign"));
  if (generator.name != "lhv") panel.e_column(1);
  if (generator.name == "nonlocal-eacp") panel.p_column(1);

  for (const auto& c : comparisons) {
    panel.column(c.first);
    panel.column(c.second);
  }
  for (auto name : inequalities) {
    if (name == InequalityName::custom_boole)
      throw std::invalid_argument("plan: custom-boole cannot be evaluated from a plan");
    inequality_pairs(name, panel);
  }
}

const CoincidenceEstimate& ExperimentResult::estimate(const LabelPair& pair) const {
  for (const auto& [p, e] : estimates)
    if (p == pair) return e;
  throw std::out_of_range("no estimate for " + pair.str());
}

std::vector<LabelPair> inequality_pairs(InequalityName name, const SettingsPanel& panel) {
  auto e = [&](std::size_t role) { return panel.setting(panel.e_column(role)).label(); };
  auto p = [&](std::size_t role) { return panel.setting(panel.p_column(role)).label(); };
  switch (name) {
    case InequalityName::star:
      return {{e(1), p(0)}, {p(0), e(0)}, {e(0), p(1)}, {e(1), p(1)}};
    case InequalityName::double_star:
      return {{p(0), e(0)}, {e(0), e(1)}, {e(1), p(0)}};
    case InequalityName::minmax_a4:
      return {{p(0), e(0)}, {p(0), e(1)}, {e(1), e(0)}};
    case InequalityName::custom_boole: break;
  }
  throw std::invalid_argument("custom-boole has no fixed pairs");
}

CoincidenceEstimate qma_analytic_coincidence(const SettingsPanel& panel, const LabelPair& pair) {
  const auto a = panel.column(pair.first);
  const auto b = panel.column(pair.second);
  if (a == b) return CoincidenceEstimate::analytic(1.0);
  if (panel.station(a) == panel.station(b)) return CoincidenceEstimate::analytic(0.5);
  return singlet_coincidence(panel.setting(a), panel.setting(b));
}

ExperimentResult run_experiment(const ExperimentPlan& plan) {
  plan.validate();
  const auto started = std::chrono::steady_clock::now();
  const auto pairs = experiment_pairs(plan);
  const ChunkRunner runner(plan, pairs);

  const std::size_t n_chunks = (plan.n_pairs + plan.chunk_size - 1) / plan.chunk_size;
  std::vector<ChunkCounts> chunks(n_chunks);
  const unsigned threads = std::max(1U, std::min<unsigned>(plan.threads, n_chunks));
  if (threads == 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) chunks[c] = runner(c);
  } else {
    std::vector<std::future<void>> jobs;
    for (unsigned t = 0; t < threads; ++t)
      jobs.push_back(std::async(std::launch::async, [&, t] {
        for (std::size_t c = t; c < n_chunks; c += threads) chunks[c] = runner(c);
      }));
    for (auto& j : jobs) j.get();
  }

  ExperimentResult result;
  result.seed = plan.seed;
  result.n_pairs = plan.n_pairs;
  result.generator = plan.generator.name;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    std::uint64_t agree = 0;
    for (const auto& ch : chunks) agree += ch.agreements[k];
    result.estimates.emplace_back(
        pairs[k], CoincidenceEstimate::from_counts(agree, plan.n_pairs, chunks.front().kinds[k]));
  }
  for (auto name : plan.inequalities) {
    std::vector<InequalityTerm> terms;
    for (const auto& p : inequality_pairs(name, plan.panel))
      terms.push_back({p.str(), result.estimate(p)});
    result.reports.push_back(evaluate(name, std::move(terms), plan.sigma_k));
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

CounterfactualRun generate_chunk(const ExperimentPlan& plan, std::size_t chunk) {
  plan.validate();
  const std::size_t start = chunk * plan.chunk_size;
  if (start >= plan.n_pairs) throw std::out_of_range("chunk past the end of the plan");
  Rng rng = Rng::substream(plan.seed, chunk);
  return generate_plain(plan, std::min(plan.chunk_size, plan.n_pairs - start), rng, start);
}

ExperimentPlan parse_plan(std::istream& in) {
  ExperimentPlan plan;
  plan.comparisons.clear();
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("plan line " + std::to_string(lineno) + ": expected key = value");
    const auto key = trim(std::string_view(line).substr(0, eq));
    const auto val = trim(std::string_view(line).substr(eq + 1));
    try {
      if (key == "generator") {
        plan.generator.name = val;
      } else if (key == "mode" || key == "variant" || key == "family") {
        plan.generator.params[key] = val;
      } else if (key == "e_settings") {
        plan.panel.e_settings = parse_settings(val);
      } else if (key == "p_settings") {
        plan.panel.p_settings = parse_settings(val);
      } else if (key == "n_pairs") {
        plan.n_pairs = parse_number<std::size_t>(val, key);
      } else if (key == "seed") {
        plan.seed = parse_number<std::uint64_t>(val, key);
      } else if (key == "comparisons") {
        for (const auto& item : split(val, ',')) {
          auto parts = split(item, '/');
          if (parts.size() != 2)
            throw std::invalid_argument("comparison '" + item + "' must look like A/B");
          plan.comparisons.push_back({parts[0], parts[1]});
        }
      } else if (key == "inequalities") {
        for (const auto& item : split(val, ',')) {
          auto name = inequality_from_string(item);
          if (!name) throw std::invalid_argument("unknown inequality '" + item + "'");
          plan.inequalities.push_back(*name);
        }
      } else if (key == "sigma_k") {
        plan.sigma_k = parse_number<double>(val, key);
      } else if (key == "chunk_size") {
        plan.chunk_size = parse_number<std::size_t>(val, key);
      } else if (key == "threads") {
        plan.threads = parse_number<unsigned>(val, key);
      } else {
        throw std::invalid_argument("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("plan line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  plan.validate();
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open plan file '" + path + "'");
  return parse_plan(in);
}

SweepTable angle_sweep(const ExperimentPlan& plan_template, const std::string& swept_label,
                       const std::vector<double>& angles_deg, bool empirical) {
  plan_template.panel.column(swept_label);
  for (double a : angles_deg)
    if (!std::isfinite(a)) throw std::invalid_argument("sweep angles must be finite");

  SweepTable table;
  table.swept_label = swept_label;
  table.pairs = experiment_pairs(plan_template);
  table.inequalities = plan_template.inequalities;
  table.empirical = empirical;

  for (double deg : angles_deg) {
    ExperimentPlan plan = plan_template;
    plan.panel = plan_template.panel.with_angle(swept_label, deg);
    SweepRow row;
    row.degrees = deg;
    for (const auto& p : table.pairs) row.analytic.push_back(qma_analytic_coincidence(plan.panel, p));
    for (auto name : plan.inequalities) {
      std::vector<InequalityTerm> terms;
      for (const auto& p : inequality_pairs(name, plan.panel))
        terms.push_back({p.str(), qma_analytic_coincidence(plan.panel, p)});
      row.analytic_reports.push_back(evaluate(name, std::move(terms), plan.sigma_k));
    }
    if (empirical) {
      auto result = run_experiment(plan);
      for (const auto& p : table.pairs) row.empirical.push_back(result.estimate(p));
      row.empirical_reports = std::move(result.reports);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

void write_csv(const SweepTable& table, std::ostream& out) {
  out << "angle_deg";
  for (const auto& p : table.pairs) out << ",analytic:" << p.str();
  if (table.empirical) {
    for (const auto& p : table.pairs) out << ",empirical:" << p.str();
    for (const auto& p : table.pairs) out << ",se:" << p.str();
  }
  for (auto n : table.inequalities) out << ",margin:" << to_string(n);
  if (table.empirical)
    for (auto n : table.inequalities) out << ",empirical_margin:" << to_string(n);
  out << '\n';
  for (const auto& row : table.rows) {
    out << fmt(row.degrees);
    for (const auto& e : row.analytic) out << ',' << fmt(e.value);
    if (table.empirical) {
      for (const auto& e : row.empirical) out << ',' << fmt(e.value);
      for (const auto& e : row.empirical) out << ',' << fmt(e.std_error);
    }
    for (const auto& r : row.analytic_reports) out << ',' << fmt(r.margin);
    if (table.empirical)
      for (const auto& r : row.empirical_reports) out << ',' << fmt(r.margin);
    out << '\n';
  }
}

}  // namespace bellkit
