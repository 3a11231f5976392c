#include "bellkit/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bellkit {

std::string_view to_string(InequalityName n) noexcept {
  switch (n) {
    case InequalityName::star: return "star";
    case InequalityName::double_star: return "double-star";
    case InequalityName::minmax_a4: return "minmax-a4";
    case InequalityName::custom_boole: return "custom-boole";
  }
  return "?";
}

std::optional<InequalityName> inequality_from_string(std::string_view s) {
  for (auto n : {InequalityName::star, InequalityName::double_star, InequalityName::minmax_a4,
                 InequalityName::custom_boole})
    if (to_string(n) == s) return n;
  return std::nullopt;
}

std::size_t arity(InequalityName n) noexcept {
  switch (n) {
    case InequalityName::star: return 4;
    case InequalityName::double_star: return 3;
    case InequalityName::minmax_a4: return 3;
    case InequalityName::custom_boole: return 0;
  }
  return 0;
}

std::vector<std::string> default_term_pairs(InequalityName name) {
  switch (name) {
    case InequalityName::star: return {"E'=P", "P=E", "E=P'", "E'=P'"};
    case InequalityName::double_star: return {"P=E", "E=E'", "E'=P"};
    case InequalityName::minmax_a4: return {"P=E", "P=E'", "E'=E"};
    case InequalityName::custom_boole: return {};
  }
  return {};
}

bool is_violated(double margin, double uncertainty, bool all_analytic, double sigma_k) noexcept {
  if (all_analytic) return margin < -kAnalyticTolerance;
  return margin < -sigma_k * uncertainty;
}

namespace {

bool all_analytic(const std::vector<InequalityTerm>& terms) {
  return std::all_of(terms.begin(), terms.end(), [](const InequalityTerm& t) {
    return t.estimate.kind == EstimateKind::analytic;
  });
}

InequalityReport finish(InequalityName name, std::vector<InequalityTerm> terms, double lhs,
                        double rhs, double variance, double sigma_k) {
  InequalityReport r;
  r.name = name;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = lhs - rhs;
  r.uncertainty = std::sqrt(variance);
  r.sigma_k = sigma_k;
  r.violated = is_violated(r.margin, r.uncertainty, all_analytic(terms), sigma_k);
  r.terms = std::move(terms);
  return r;
}

double sq(double x) { return x * x; }

}  // namespace

InequalityReport evaluate(InequalityName name, std::vector<InequalityTerm> terms, double sigma_k) {
  if (name == InequalityName::custom_boole)
    throw std::invalid_argument("custom-boole inequalities are evaluated with eval_boole");
  if (terms.size() != arity(name))
    throw std::invalid_argument(std::string(to_string(name)) + " takes " +
                                std::to_string(arity(name)) + " probabilities, got " +
                                std::to_string(terms.size()));
  auto v = [&](std::size_t i) { return terms[i].estimate.value; };
  auto se = [&](std::size_t i) { return terms[i].estimate.std_error; };

  switch (name) {
    case InequalityName::star: {
      double lhs = v(0) + v(1) + v(2);
      double var = sq(se(0)) + sq(se(1)) + sq(se(2)) + sq(se(3));
      double rhs = v(3);
      return finish(name, std::move(terms), lhs, rhs, var, sigma_k);
    }
    case InequalityName::double_star: {
      double lhs = v(0) + v(1) + v(2);
      double var = sq(se(0)) + sq(se(1)) + sq(se(2));
      return finish(name, std::move(terms), lhs, 1.0, var, sigma_k);
    }
    case InequalityName::minmax_a4: {
      const std::size_t hi = v(0) >= v(1) ? 0 : 1;
      double lhs = v(hi);
      double rhs = (1.0 - v(2)) / 2.0;
      double var = sq(se(hi)) + sq(se(2) / 2.0);
      return finish(name, std::move(terms), lhs, rhs, var, sigma_k);
    }
    case InequalityName::custom_boole: break;
  }
  throw std::logic_error("unreachable");
}

namespace {

std::vector<InequalityTerm> named(InequalityName name,
                                  std::initializer_list<CoincidenceEstimate> values) {
  auto pairs = default_term_pairs(name);
  std::vector<InequalityTerm> terms;
  std::size_t i = 0;
  for (const auto& e : values) terms.push_back({pairs[i++], e});
  return terms;
}

}  // namespace

InequalityReport eval_star(const CoincidenceEstimate& e_prime_p, const CoincidenceEstimate& p_e,
                           const CoincidenceEstimate& e_p_prime,
                           const CoincidenceEstimate& e_prime_p_prime, double sigma_k) {
  return evaluate(InequalityName::star,
                  named(InequalityName::star, {e_prime_p, p_e, e_p_prime, e_prime_p_prime}),
                  sigma_k);
}

InequalityReport eval_double_star(const CoincidenceEstimate& p_e,
                                  const CoincidenceEstimate& e_e_prime,
                                  const CoincidenceEstimate& e_prime_p, double sigma_k) {
  return evaluate(InequalityName::double_star,
                  named(InequalityName::double_star, {p_e, e_e_prime, e_prime_p}), sigma_k);
}

InequalityReport eval_minmax_a4(const CoincidenceEstimate& p_e,
                                const CoincidenceEstimate& p_e_prime,
                                const CoincidenceEstimate& e_prime_e, double sigma_k) {
  return evaluate(InequalityName::minmax_a4,
                  named(InequalityName::minmax_a4, {p_e, p_e_prime, e_prime_e}), sigma_k);
}

}  // namespace bellkit
