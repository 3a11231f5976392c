#pragma once

// Bell inequalities in coincidence-probability form.
//
//   star:        pi(E'=P) + pi(P=E) + pi(E=P') >= pi(E'=P')
//   double-star: pi(P=E) + pi(E=E') + pi(E'=P) >= 1
//   minmax-a4:   max(pi(P=E), pi(P=E')) >= (1 - pi(E'=E)) / 2
//
// The outer "min" of the min-max form has no stated domain; it is evaluated
// per instance, i.e. only the inner comparison is checked.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellkit/qm.hpp"

namespace bellkit {

inline constexpr double kDefaultSigmaK = 3.0;

enum class InequalityName { star, double_star, minmax_a4, custom_boole };

std::string_view to_string(InequalityName n) noexcept;
/// Accepts "star", "double-star", "minmax-a4", "custom-boole".
std::optional<InequalityName> inequality_from_string(std::string_view s);
/// Number of coincidence terms the named inequality takes (0 for custom).
std::size_t arity(InequalityName n) noexcept;

struct InequalityTerm {
  std::string pair;  // e.g. "E'=P"
  CoincidenceEstimate estimate;
};

/// margin = lhs - rhs, negative means violated. With only analytic terms the
/// verdict is margin < -1e-12; otherwise margin < -sigma_k * uncertainty.
struct InequalityReport {
  InequalityName name = InequalityName::double_star;
  std::vector<InequalityTerm> terms;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double uncertainty = 0.0;
  double sigma_k = kDefaultSigmaK;
  bool violated = false;
};

bool is_violated(double margin, double uncertainty, bool all_analytic, double sigma_k) noexcept;

InequalityReport eval_star(const CoincidenceEstimate& e_prime_p, const CoincidenceEstimate& p_e,
                           const CoincidenceEstimate& e_p_prime,
                           const CoincidenceEstimate& e_prime_p_prime,
                           double sigma_k = kDefaultSigmaK);

InequalityReport eval_double_star(const CoincidenceEstimate& p_e,
                                  const CoincidenceEstimate& e_e_prime,
                                  const CoincidenceEstimate& e_prime_p,
                                  double sigma_k = kDefaultSigmaK);

InequalityReport eval_minmax_a4(const CoincidenceEstimate& p_e, const CoincidenceEstimate& p_e_prime,
                                const CoincidenceEstimate& e_prime_e,
                                double sigma_k = kDefaultSigmaK);

/// Dispatch by name over terms in the order listed above; term pair names
/// are kept as given. Throws std::invalid_argument on an arity mismatch or
/// for custom-boole (use eval_boole).
InequalityReport evaluate(InequalityName name, std::vector<InequalityTerm> terms,
                          double sigma_k = kDefaultSigmaK);

/// Canonical pair names of the named inequality's terms, with E/E'/P/P' as
/// the role labels.
std::vector<std::string> default_term_pairs(InequalityName name);

}  // namespace bellkit
