#pragma once

// Reproducible experiment harness.
//
// Pairs are produced in fixed-size chunks; chunk c draws from
// Rng::substream(seed, c). Results therefore depend only on the plan (seed,
// chunk size, ...) and not on the thread count.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bellkit/inequalities.hpp"
#include "bellkit/models.hpp"

namespace bellkit {

inline constexpr std::size_t kDefaultPairs = 1'000'000;
inline constexpr std::uint64_t kDefaultSeed = 20090512;
inline constexpr std::size_t kDefaultChunk = 1U << 16;

/// Generator names:
///   qm-realist            params: mode (conditional-independence | lemma-exact),
///                                 variant (measured-E | unmeasured-E)
///   qm-realist-assembled  P-anchored pairs from a conditional-independence run
///                         (what a P-E observer infers), E-side-only pairs
///                         from a lemma-exact run (what an E-P observer infers)
///   lhv                   params: family (default "sign")
///   nonlocal-eacp
struct GeneratorSpec {
  std::string name = "qm-realist";
  std::map<std::string, std::string> params;

  std::string param(const std::string& key, const std::string& fallback) const;
};

struct LabelPair {
  std::string first;
  std::string second;

  std::string str() const { return first + "=" + second; }
  bool operator==(const LabelPair&) const = default;
  auto operator<=>(const LabelPair&) const = default;
};

struct ExperimentPlan {
  GeneratorSpec generator;
  SettingsPanel panel = SettingsPanel::canonical();
  std::size_t n_pairs = kDefaultPairs;
  std::uint64_t seed = kDefaultSeed;
  std::vector<LabelPair> comparisons;
  std::vector<InequalityName> inequalities;
  double sigma_k = kDefaultSigmaK;
  std::size_t chunk_size = kDefaultChunk;
  unsigned threads = 1;

  /// Throws std::invalid_argument: n_pairs or chunk_size zero, unknown
  /// generator or parameter value, comparison label missing from the panel.
  void validate() const;
};

struct ExperimentResult {
  std::vector<std::pair<LabelPair, CoincidenceEstimate>> estimates;
  std::vector<InequalityReport> reports;
  std::uint64_t seed = 0;
  std::size_t n_pairs = 0;
  std::string generator;
  double wall_seconds = 0.0;

  /// Throws std::out_of_range if the pair was not estimated.
  const CoincidenceEstimate& estimate(const LabelPair& pair) const;
};

/// Runs the plan. Pairs needed by the requested inequalities are estimated
/// even when not listed in `comparisons` and appended after them.
ExperimentResult run_experiment(const ExperimentPlan& plan);

/// The records of chunk `chunk` exactly as run_experiment draws them. Throws
/// std::invalid_argument for qm-realist-assembled, which mixes two runs.
CounterfactualRun generate_chunk(const ExperimentPlan& plan, std::size_t chunk);

/// Label pairs feeding the named inequality under the panel's roles
/// (E = e[0], E' = e[1], P = p[0], P' = p[1]).
std::vector<LabelPair> inequality_pairs(InequalityName name, const SettingsPanel& panel);

/// QM plus augmentation, analytically: singlet agreement across stations,
/// 1/2 between two settings of the same station.
CoincidenceEstimate qma_analytic_coincidence(const SettingsPanel& panel, const LabelPair& pair);

/// Reads a plan from `key = value` lines ('#' starts a comment):
///   generator = qm-realist          mode = lemma-exact
///   variant = measured-E            family = sign
///   e_settings = E:0, E':90         p_settings = P:45, P':-45     (degrees)
///   n_pairs = 1000000               seed = 42
///   comparisons = P/E, E/E'         inequalities = double-star, star
///   sigma_k = 3                     chunk_size = 65536            threads = 4
/// Unknown keys are rejected.
ExperimentPlan parse_plan(std::istream& in);
ExperimentPlan load_plan(const std::string& path);

/// One row per swept angle.
struct SweepRow {
  double degrees = 0.0;
  /// QM+A analytic value for every comparison pair.
  std::vector<CoincidenceEstimate> analytic;
  std::vector<InequalityReport> analytic_reports;
  /// Filled only for empirical sweeps: the run_experiment result at this angle.
  std::vector<CoincidenceEstimate> empirical;
  std::vector<InequalityReport> empirical_reports;
};

struct SweepTable {
  std::string swept_label;
  std::vector<LabelPair> pairs;
  std::vector<InequalityName> inequalities;
  bool empirical = false;
  std::vector<SweepRow> rows;
};

/// Re-points `swept_label` to each angle (degrees) of the plan template.
/// Throws std::invalid_argument for non-finite angles or an unknown label.
SweepTable angle_sweep(const ExperimentPlan& plan_template, const std::string& swept_label,
                       const std::vector<double>& angles_deg, bool empirical);

/// Columns: angle_deg, analytic:<pair>..., [empirical:<pair>..., se:<pair>...],
/// margin:<inequality>..., [empirical_margin:<inequality>...].
void write_csv(const SweepTable& table, std::ostream& out);

}  // namespace bellkit
