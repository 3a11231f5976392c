// Facets of the projected assignment polytope by the double description
// method. A facet a0 + a.q >= 0 of conv{q_i} is an extreme ray of the cone
// {x : (1, q_i) . x >= 0 for all i}; the cone is pointed because the
// projection of the assignment polytope onto distinct pair coordinates is
// full-dimensional.

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "bellkit/polytope.hpp"

namespace bellkit {

namespace {

using boost::multiprecision::cpp_int;
using Vec = std::vector<Rational>;

struct Ray {
  Vec x;
  std::uint64_t zeros = 0;  // processed rows where the ray is tight
};

Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  return s;
}

// Indices of a maximal linearly independent subset of rows (greedy).
std::vector<std::size_t> independent_rows(const std::vector<Vec>& rows) {
  std::vector<Vec> echelon;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> chosen;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Vec v = rows[r];
    for (std::size_t k = 0; k < echelon.size(); ++k) {
      if (v[pivots[k]] == 0) continue;
      Rational f = v[pivots[k]] / echelon[k][pivots[k]];
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= f * echelon[k][j];
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (it == v.end()) continue;
    pivots.push_back(static_cast<std::size_t>(it - v.begin()));
    echelon.push_back(std::move(v));
    chosen.push_back(r);
  }
  return chosen;
}

// Inverse of a square matrix by Gauss-Jordan; throws if singular.
std::vector<Vec> inverse(std::vector<Vec> m) {
  const std::size_t d = m.size();
  std::vector<Vec> inv(d, Vec(d, 0));
  for (std::size_t i = 0; i < d; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (p < d && m[p][c] == 0) ++p;
    if (p == d) throw std::logic_error("double description: singular basis");
    std::swap(m[p], m[c]);
    std::swap(inv[p], inv[c]);
    const Rational pv = m[c][c];
    for (std::size_t j = 0; j < d; ++j) {
      m[c][j] /= pv;
      inv[c][j] /= pv;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || m[r][c] == 0) continue;
      const Rational f = m[r][c];
      for (std::size_t j = 0; j < d; ++j) {
        m[r][j] -= f * m[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

Vec normalized(Vec x) {
  cpp_int l = 1;
  for (const auto& v : x) l = boost::multiprecision::lcm(l, denominator(v));
  cpp_int g = 0;
  for (auto& v : x) {
    v *= l;
    g = boost::multiprecision::gcd(g, abs(numerator(v)));
  }
  if (g != 0)
    for (auto& v : x) v /= g;
  return x;
}

int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

}  // namespace

std::vector<BooleInequality> enumerate_boole_facets(std::size_t n_vars,
                                                    const std::vector<VarPair>& pairs) {
  if (n_vars < 2 || n_vars > kMaxFacetVars)
    throw std::invalid_argument("facet enumeration supports 2.." + std::to_string(kMaxFacetVars) +
                                " variables, got " + std::to_string(n_vars));
  if (pairs.empty()) throw std::invalid_argument("facet enumeration needs at least one pair");
  std::set<VarPair> seen;
  for (auto [a, b] : pairs) {
    if (a >= n_vars || b >= n_vars || a == b)
      throw std::invalid_argument("facet enumeration: malformed pair (" + std::to_string(a) +
                                  ", " + std::to_string(b) + ")");
    if (!seen.insert({std::min(a, b), std::max(a, b)}).second)
      throw std::invalid_argument("facet enumeration: duplicate pair (" + std::to_string(a) +
                                  ", " + std::to_string(b) + ")");
  }

  const std::size_t m = pairs.size();
  const std::size_t dim = m + 1;

  std::set<std::vector<int>> points;
  for (Assignment v = 0; v < (Assignment{1} << n_vars); ++v) {
    std::vector<int> q;
    for (auto [a, b] : pairs) q.push_back(((v >> a) & 1U) == ((v >> b) & 1U) ? 1 : 0);
    points.insert(std::move(q));
  }
  std::vector<Vec> rows;
  for (const auto& q : points) {
    Vec r{Rational(1)};
    for (int v : q) r.emplace_back(v);
    rows.push_back(std::move(r));
  }
  if (rows.size() > 64) throw std::logic_error("double description: too many points");

  const auto basis = independent_rows(rows);
  if (basis.size() != dim) throw std::logic_error("double description: projection is not full-dimensional");

  std::vector<Vec> a_b;
  for (auto r : basis) a_b.push_back(rows[r]);
  const auto inv = inverse(a_b);

  // Columns of inv are the initial rays: tight on all basis rows but one.
  std::vector<Ray> rays;
  std::uint64_t processed = 0;
  for (auto r : basis) processed |= std::uint64_t{1} << r;
  for (std::size_t k = 0; k < dim; ++k) {
    Ray ray;
    for (std::size_t i = 0; i < dim; ++i) ray.x.push_back(inv[i][k]);
    for (std::size_t j = 0; j < dim; ++j)
      if (j != k) ray.zeros |= std::uint64_t{1} << basis[j];
    rays.push_back(std::move(ray));
  }

  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (processed & (std::uint64_t{1} << r)) continue;
    const std::uint64_t bit = std::uint64_t{1} << r;

    std::vector<std::size_t> pos, neg;
    std::vector<Rational> value(rays.size());
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      value[i] = dot(rows[r], rays[i].x);
      if (value[i] > 0) {
        pos.push_back(i);
        next.push_back(rays[i]);
      } else if (value[i] < 0) {
        neg.push_back(i);
      } else {
        next.push_back(rays[i]);
        next.back().zeros |= bit;
      }
    }

    // Combinatorial adjacency: no third ray is tight on every row both are.
    for (auto i : pos) {
      for (auto j : neg) {
        const std::uint64_t common = rays[i].zeros & rays[j].zeros;
        if (popcount(common) < static_cast<int>(dim) - 2) continue;
        bool adjacent = true;
        for (std::size_t k = 0; k < rays.size() && adjacent; ++k)
          if (k != i && k != j && (rays[k].zeros & common) == common) adjacent = false;
        if (!adjacent) continue;
        Ray ray;
        ray.x.resize(dim);
        for (std::size_t t = 0; t < dim; ++t)
          ray.x[t] = value[i] * rays[j].x[t] - value[j] * rays[i].x[t];
        ray.x = normalized(std::move(ray.x));
        ray.zeros = common | bit;
        next.push_back(std::move(ray));
      }
    }
    rays = std::move(next);
    processed |= bit;
  }

  std::vector<BooleInequality> facets;
  for (const auto& ray : rays) {
    Vec x = normalized(ray.x);
    BooleInequality f;
    f.pairs = pairs;
    for (std::size_t k = 1; k < dim; ++k)
      f.coefficients.push_back(static_cast<long long>(numerator(x[k])));
    f.bound = -static_cast<long long>(numerator(x[0]));
    facets.push_back(std::move(f));
  }
  std::sort(facets.begin(), facets.end(), [](const BooleInequality& a, const BooleInequality& b) {
    return std::tie(a.coefficients, a.bound) < std::tie(b.coefficients, b.bound);
  });
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  return facets;
}

}  // namespace bellkit
