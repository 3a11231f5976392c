#pragma once

// The local (Boole) polytope: convex hull of deterministic +1/-1 assignments
// of n binary observables, seen through pairwise agreement probabilities.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bellkit/inequalities.hpp"

namespace bellkit {

using Rational = boost::multiprecision::cpp_rational;

/// A probability given either as a float (tolerance-based decisions) or as
/// an exact rational.
using Probability = std::variant<double, Rational>;

inline constexpr std::size_t kMaxPolytopeVars = 12;
inline constexpr std::size_t kMaxFacetVars = 4;
inline constexpr double kFeasibilityTolerance = 1e-9;

using VarPair = std::pair<std::size_t, std::size_t>;

/// Parses "0.1464466", "1/4", "1e-3" into an exact rational; throws
/// std::invalid_argument on malformed text.
Rational parse_rational(const std::string& text);
double to_double(const Probability& p);
std::string to_string(const Probability& p);

/// Deterministic assignment: bit i set means variable i is -1.
using Assignment = std::uint32_t;
/// "+-+" style rendering, variable 0 first.
std::string assignment_string(Assignment a, std::size_t n_vars);
Assignment parse_assignment(const std::string& s);

/// sum_k coefficients[k] * pi(v_a = v_b)[k] >= bound, integer coefficients.
struct BooleInequality {
  std::vector<VarPair> pairs;
  std::vector<long long> coefficients;
  long long bound = 0;

  double lhs(const std::vector<double>& probabilities) const;
  Rational lhs(const std::vector<Rational>& probabilities) const;
  /// Value at a deterministic assignment (agreements counted as 0/1).
  long long lhs_at(Assignment a) const;
  /// e.g. "p(0,1) + p(1,2) + p(2,0) >= 1"; `names` renames variables.
  std::string to_string(const std::vector<std::string>& names = {}) const;

  bool operator==(const BooleInequality&) const = default;
};

struct PairTarget {
  std::size_t a = 0;
  std::size_t b = 0;
  Probability target = 0.0;
};

enum class Feasibility { undecided, feasible, infeasible };
std::string_view to_string(Feasibility f) noexcept;

struct WitnessWeight {
  Assignment assignment = 0;
  Probability weight = 0.0;
};

struct PolytopeInstance {
  std::size_t n_vars = 0;
  std::vector<PairTarget> constraints;

  Feasibility feasible = Feasibility::undecided;
  /// True when every target was rational and the decision is exact.
  bool exact = false;
  /// Non-zero weights over deterministic assignments (feasible only).
  std::vector<WitnessWeight> witness;
  /// Boole inequality valid on every assignment and violated by the targets
  /// (exact infeasible decisions only).
  std::optional<BooleInequality> certificate;

  /// Throws std::invalid_argument on n_vars > kMaxPolytopeVars, bad indices,
  /// or a target outside [0, 1].
  void validate() const;
};

/// Decides whether some distribution over the 2^n assignments reproduces all
/// pairwise agreement targets (phase-one simplex, Bland's rule). Rational
/// targets are decided exactly; float targets with kFeasibilityTolerance.
PolytopeInstance check_local_polytope(PolytopeInstance instance);

/// Agreement probability of `pair` under a witness.
Probability witness_agreement(const std::vector<WitnessWeight>& witness, VarPair pair);

/// All facets of the projection of the assignment polytope onto the
/// agreement coordinates of `pairs` (double description, exact). Sorted.
/// Throws std::invalid_argument for n_vars outside [2, kMaxFacetVars] or
/// malformed/duplicate pairs.
std::vector<BooleInequality> enumerate_boole_facets(std::size_t n_vars,
                                                    const std::vector<VarPair>& pairs);

/// Report with name custom-boole. `terms` follow `inequality.pairs`.
InequalityReport eval_boole(const BooleInequality& inequality,
                            std::vector<InequalityTerm> terms,
                            double sigma_k = kDefaultSigmaK);

}  // namespace bellkit
