#include "bellkit/polytope.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "simplex.hpp"

namespace bellkit {

namespace {

using boost::multiprecision::cpp_int;

cpp_int parse_integer(std::string_view digits, std::string_view whole) {
  if (digits.empty()) throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
  cpp_int v = 0;
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw std::invalid_argument("not a number: '" + std::string(whole) + "'");
    v = v * 10 + (c - '0');
  }
  return v;
}

cpp_int pow10(long long e) {
  cpp_int v = 1;
  for (long long i = 0; i < e; ++i) v *= 10;
  return v;
}

bool agree(Assignment a, VarPair p) {
  return ((a >> p.first) & 1U) == ((a >> p.second) & 1U);
}

long long to_ll(const cpp_int& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw std::overflow_error("coefficient does not fit in 64 bits");
  return static_cast<long long>(v);
}

// Scales a rational vector to coprime integers.
std::vector<long long> integerize(const std::vector<Rational>& v) {
  cpp_int l = 1;
  for (const auto& x : v) l = boost::multiprecision::lcm(l, denominator(x));
  std::vector<cpp_int> ints;
  cpp_int g = 0;
  for (const auto& x : v) {
    cpp_int k = numerator(x) * (l / denominator(x));
    g = boost::multiprecision::gcd(g, abs(k));
    ints.push_back(k);
  }
  std::vector<long long> out;
  for (auto& k : ints) out.push_back(to_ll(g == 0 ? k : k / g));
  return out;
}

template <class T>
T as(const Probability& p);

template <>
double as<double>(const Probability& p) {
  return to_double(p);
}

template <>
Rational as<Rational>(const Probability& p) {
  return std::get<Rational>(p);
}

template <class T>
void solve(PolytopeInstance& inst) {
  const std::size_t n_assign = std::size_t{1} << inst.n_vars;
  const std::size_t rows = inst.constraints.size() + 1;
  std::vector<std::vector<T>> a(rows, std::vector<T>(n_assign, T(0)));
  std::vector<T> b(rows);
  for (std::size_t v = 0; v < n_assign; ++v) a[0][v] = T(1);
  b[0] = T(1);
  for (std::size_t k = 0; k < inst.constraints.size(); ++k) {
    const auto& c = inst.constraints[k];
    for (std::size_t v = 0; v < n_assign; ++v)
      if (agree(static_cast<Assignment>(v), {c.a, c.b})) a[k + 1][v] = T(1);
    b[k + 1] = as<T>(c.target);
  }

  auto res = detail::PhaseOne<T>(a, b).solve();

  bool feasible;
  if constexpr (std::is_same_v<T, Rational>)
    feasible = res.infeasibility == 0;
  else
    feasible = res.infeasibility <= kFeasibilityTolerance;

  inst.witness.clear();
  inst.certificate.reset();
  if (feasible) {
    inst.feasible = Feasibility::feasible;
    for (std::size_t v = 0; v < n_assign; ++v) {
      T w = res.x[v];
      if constexpr (std::is_same_v<T, double>) {
        if (w <= 0.0) continue;
      } else {
        if (w == 0) continue;
      }
      inst.witness.push_back({static_cast<Assignment>(v), Probability(w)});
    }
    return;
  }

  inst.feasible = Feasibility::infeasible;
  if constexpr (std::is_same_v<T, Rational>) {
    std::vector<Rational> z;
    for (auto& y : res.y) z.push_back(-y);
    std::vector<long long> ints;
    try {
      ints = integerize(z);
    } catch (const std::overflow_error&) {
      return;
    }
    BooleInequality cert;
    for (const auto& c : inst.constraints) cert.pairs.emplace_back(c.a, c.b);
    cert.coefficients.assign(ints.begin() + 1, ints.end());
    cert.bound = -ints[0];

    std::vector<Rational> targets;
    for (const auto& c : inst.constraints) targets.push_back(std::get<Rational>(c.target));
    for (std::size_t v = 0; v < n_assign; ++v)
      if (cert.lhs_at(static_cast<Assignment>(v)) < cert.bound)
        throw std::logic_error("local polytope: certificate cuts off an assignment");
    if (!(cert.lhs(targets) < cert.bound))
      throw std::logic_error("local polytope: certificate does not separate the targets");
    inst.certificate = std::move(cert);
  }
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("empty number");

  bool negative = false;
  if (s.front() == '-' || s.front() == '+') {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }

  Rational value;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    cpp_int num = parse_integer(s.substr(0, slash), text);
    cpp_int den = parse_integer(s.substr(slash + 1), text);
    if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    value = Rational(num, den);
  } else {
    long long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
      std::string_view es = s.substr(e + 1);
      auto [ptr, ec] = std::from_chars(es.data() + (es.starts_with('+') ? 1 : 0),
                                       es.data() + es.size(), exponent);
      if (ec != std::errc() || ptr != es.data() + es.size())
        throw std::invalid_argument("bad exponent in '" + text + "'");
      s = s.substr(0, e);
    }
    std::string digits;
    auto dot = s.find('.');
    if (dot == std::string_view::npos) {
      digits = s;
    } else {
      digits = std::string(s.substr(0, dot)) + std::string(s.substr(dot + 1));
      exponent -= static_cast<long long>(s.size() - dot - 1);
      if (digits.empty()) throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (std::abs(exponent) > 400) throw std::invalid_argument("exponent out of range in '" + text + "'");
    cpp_int mantissa = parse_integer(digits, text);
    value = exponent >= 0 ? Rational(mantissa * pow10(exponent)) : Rational(mantissa, pow10(-exponent));
  }
  return negative ? Rational(-value) : value;
}

double to_double(const Probability& p) {
  if (const auto* d = std::get_if<double>(&p)) return *d;
  return std::get<Rational>(p).convert_to<double>();
}

std::string to_string(const Probability& p) {
  if (const auto* d = std::get_if<double>(&p)) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, *d);
    return std::string(buf, ptr);
  }
  return std::get<Rational>(p).str();
}

std::string assignment_string(Assignment a, std::size_t n_vars) {
  std::string s;
  for (std::size_t i = 0; i < n_vars; ++i) s.push_back(((a >> i) & 1U) ? '-' : '+');
  return s;
}

Assignment parse_assignment(const std::string& s) {
  if (s.size() > 32) throw std::invalid_argument("assignment too long");
  Assignment a = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '-')
      a |= Assignment{1} << i;
    else if (s[i] != '+')
      throw std::invalid_argument("assignment must be made of '+' and '-': " + s);
  }
  return a;
}

double BooleInequality::lhs(const std::vector<double>& probabilities) const {
  if (probabilities.size() != coefficients.size())
    throw std::invalid_argument("Boole inequality: wrong number of probabilities");
  double s = 0;
  for (std::size_t k = 0; k < coefficients.size(); ++k)
    s += static_cast<double>(coefficients[k]) * probabilities[k];
  return s;
}

Rational BooleInequality::lhs(const std::vector<Rational>& probabilities) const {
  if (probabilities.size() != coefficients.size())
    throw std::invalid_argument("Boole inequality: wrong number of probabilities");
  Rational s = 0;
  for (std::size_t k = 0; k < coefficients.size(); ++k) s += coefficients[k] * probabilities[k];
  return s;
}

long long BooleInequality::lhs_at(Assignment a) const {
  long long s = 0;
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (agree(a, pairs[k])) s += coefficients[k];
  return s;
}

std::string BooleInequality::to_string(const std::vector<std::string>& names) const {
  auto name = [&](std::size_t i) {
    return i < names.size() ? names[i] : std::to_string(i);
  };
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    long long c = coefficients[k];
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (std::abs(c) != 1) os << std::abs(c) << "*";
    os << "p(" << name(pairs[k].first) << "=" << name(pairs[k].second) << ")";
    first = false;
  }
  if (first) os << "0";
  os << " >= " << bound;
  return os.str();
}

std::string_view to_string(Feasibility f) noexcept {
  switch (f) {
    case Feasibility::undecided: return "undecided";
    case Feasibility::feasible: return "feasible";
    case Feasibility::infeasible: return "infeasible";
  }
  return "?";
}

void PolytopeInstance::validate() const {
  if (n_vars == 0) throw std::invalid_argument("polytope needs at least one variable");
  if (n_vars > kMaxPolytopeVars)
    throw std::invalid_argument("polytope: n_vars = " + std::to_string(n_vars) +
                                " exceeds the limit of " + std::to_string(kMaxPolytopeVars));
  for (const auto& c : constraints) {
    if (c.a >= n_vars || c.b >= n_vars || c.a == c.b)
      throw std::invalid_argument("polytope: malformed pair (" + std::to_string(c.a) + ", " +
                                  std::to_string(c.b) + ")");
    bool in_range = std::visit(
        [](const auto& v) { return v >= 0 && v <= 1; }, c.target);
    if (!in_range) throw std::invalid_argument("polytope: target " + bellkit::to_string(c.target) +
                                               " outside [0, 1]");
  }
}

PolytopeInstance check_local_polytope(PolytopeInstance instance) {
  instance.validate();
  const bool exact = std::all_of(instance.constraints.begin(), instance.constraints.end(),
                                 [](const PairTarget& c) {
                                   return std::holds_alternative<Rational>(c.target);
                                 });
  instance.exact = exact;
  if (exact)
    solve<Rational>(instance);
  else
    solve<double>(instance);
  return instance;
}

Probability witness_agreement(const std::vector<WitnessWeight>& witness, VarPair pair) {
  const bool exact = std::all_of(witness.begin(), witness.end(), [](const WitnessWeight& w) {
    return std::holds_alternative<Rational>(w.weight);
  });
  if (exact && !witness.empty()) {
    Rational s = 0;
    for (const auto& w : witness)
      if (agree(w.assignment, pair)) s += std::get<Rational>(w.weight);
    return s;
  }
  double s = 0;
  for (const auto& w : witness)
    if (agree(w.assignment, pair)) s += to_double(w.weight);
  return s;
}

InequalityReport eval_boole(const BooleInequality& inequality, std::vector<InequalityTerm> terms,
                            double sigma_k) {
  if (terms.size() != inequality.coefficients.size())
    throw std::invalid_argument("custom-boole: expected " +
                                std::to_string(inequality.coefficients.size()) +
                                " probabilities, got " + std::to_string(terms.size()));
  double lhs = 0, var = 0;
  bool analytic = true;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const double c = static_cast<double>(inequality.coefficients[k]);
    lhs += c * terms[k].estimate.value;
    var += c * c * terms[k].estimate.std_error * terms[k].estimate.std_error;
    analytic = analytic && terms[k].estimate.kind == EstimateKind::analytic;
  }
  InequalityReport r;
  r.name = InequalityName::custom_boole;
  r.lhs = lhs;
  r.rhs = static_cast<double>(inequality.bound);
  r.margin = lhs - r.rhs;
  r.uncertainty = std::sqrt(var);
  r.sigma_k = sigma_k;
  r.violated = is_violated(r.margin, r.uncertainty, analytic, sigma_k);
  r.terms = std::move(terms);
  return r;
}

}  // namespace bellkit
