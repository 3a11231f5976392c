#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <set>

#include "bellkit/polytope.hpp"
#include "bellkit/rng.hpp"

using namespace bellkit;

namespace {

using Row = std::vector<long long>;

std::vector<Row> vertices(std::size_t n, const std::vector<VarPair>& pairs) {
  std::set<Row> pts;
  for (Assignment a = 0; a < (1U << n); ++a) {
    Row v;
    for (auto [i, j] : pairs) v.push_back(((a >> i) & 1U) == ((a >> j) & 1U));
    pts.insert(v);
  }
  return {pts.begin(), pts.end()};
}

// Rank of integer rows by fraction-free elimination in doubles (entries stay small).
std::size_t rank(std::vector<std::vector<double>> m) {
  std::size_t r = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t piv = r;
    while (piv < m.size() && std::abs(m[piv][c]) < 1e-9) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[r], m[piv]);
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r) continue;
      const double f = m[i][c] / m[r][c];
      for (std::size_t k = c; k < cols; ++k) m[i][k] -= f * m[r][k];
    }
    ++r;
  }
  return r;
}

// A valid inequality c.x >= b is a facet when its tight vertices span an
// affine space of dimension m - 1 (the polytope is full-dimensional).
bool is_facet(const std::vector<Row>& verts, const Row& c, long long b) {
  std::vector<std::vector<double>> tight;
  for (const auto& v : verts) {
    long long s = 0;
    for (std::size_t k = 0; k < c.size(); ++k) s += c[k] * v[k];
    if (s < b) return false;
    if (s == b) {
      std::vector<double> row{1.0};
      for (auto x : v) row.push_back(static_cast<double>(x));
      tight.push_back(std::move(row));
    }
  }
  return rank(tight) == c.size();
}

// Brute-force facet oracle over coefficient vectors in [-2, 2]^m.
std::set<std::pair<Row, long long>> brute_facets(std::size_t n, const std::vector<VarPair>& pairs) {
  const auto verts = vertices(n, pairs);
  const std::size_t m = pairs.size();
  std::set<std::pair<Row, long long>> out;
  Row c(m, -2);
  while (true) {
    long long g = 0;
    for (auto x : c) g = std::gcd(g, std::abs(x));
    if (g == 1) {
      long long b = std::numeric_limits<long long>::max();
      for (const auto& v : verts) {
        long long s = 0;
        for (std::size_t k = 0; k < m; ++k) s += c[k] * v[k];
        b = std::min(b, s);
      }
      if (is_facet(verts, c, b)) out.insert({c, b});
    }
    std::size_t k = 0;
    while (k < m && c[k] == 2) c[k++] = -2;
    if (k == m) break;
    ++c[k];
  }
  return out;
}

std::set<std::pair<Row, long long>> as_set(const std::vector<BooleInequality>& fs) {
  std::set<std::pair<Row, long long>> out;
  for (const auto& f : fs) out.insert({f.coefficients, f.bound});
  return out;
}

void expect_matches_oracle(std::size_t n, const std::vector<VarPair>& pairs) {
  const auto fs = enumerate_boole_facets(n, pairs);
  const auto verts = vertices(n, pairs);
  for (const auto& f : fs) {
    EXPECT_EQ(f.pairs, pairs);
    EXPECT_TRUE(is_facet(verts, f.coefficients, f.bound)) << f.to_string();
  }
  EXPECT_EQ(as_set(fs), brute_facets(n, pairs));
}

}  // namespace

TEST(Facets, ThreeCycle) {
  const std::vector<VarPair> pairs{{0, 1}, {1, 2}, {0, 2}};
  const auto fs = enumerate_boole_facets(3, pairs);
  const std::set<std::pair<Row, long long>> expected{
      {{1, 1, 1}, 1}, {{1, -1, -1}, -1}, {{-1, 1, -1}, -1}, {{-1, -1, 1}, -1}};
  EXPECT_EQ(as_set(fs), expected);
  EXPECT_TRUE(std::is_sorted(fs.begin(), fs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.coefficients, a.bound) < std::tie(b.coefficients, b.bound);
  }));
}

TEST(Facets, DoubleStarUpToRelabeling) {
  for (const auto& pairs : std::vector<std::vector<VarPair>>{{{0, 1}, {1, 2}, {2, 0}}, {{1, 2}, {0, 2}, {0, 1}}}) {
    const auto fs = enumerate_boole_facets(3, pairs);
    const BooleInequality ds{pairs, {1, 1, 1}, 1};
    EXPECT_NE(std::find(fs.begin(), fs.end(), ds), fs.end());
  }
}

TEST(Facets, SinglePair) {
  const auto fs = enumerate_boole_facets(2, {{0, 1}});
  const std::set<std::pair<Row, long long>> expected{{{1}, 0}, {{-1}, -1}};
  EXPECT_EQ(as_set(fs), expected);
}

TEST(Facets, MatchBruteForceOracle) {
  expect_matches_oracle(3, {{0, 1}, {1, 2}, {0, 2}});
  expect_matches_oracle(3, {{0, 1}, {1, 2}});
  expect_matches_oracle(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
  expect_matches_oracle(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  expect_matches_oracle(4, {{0, 1}, {1, 2}, {2, 3}});
}

TEST(Facets, Counts) {
  EXPECT_EQ(enumerate_boole_facets(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}).size(), 16U);
  EXPECT_EQ(enumerate_boole_facets(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}).size(), 16U);
}

TEST(Facets, Validation) {
  EXPECT_THROW(enumerate_boole_facets(1, {}), std::invalid_argument);
  EXPECT_THROW(enumerate_boole_facets(5, {{0, 1}}), std::invalid_argument);
  EXPECT_THROW(enumerate_boole_facets(3, {{0, 0}}), std::invalid_argument);
  EXPECT_THROW(enumerate_boole_facets(3, {{0, 3}}), std::invalid_argument);
  EXPECT_THROW(enumerate_boole_facets(3, {{0, 1}, {1, 0}}), std::invalid_argument);
  EXPECT_THROW(enumerate_boole_facets(3, {}), std::invalid_argument);
}

TEST(Facets, AgreeWithLinearProgram) {
  // Feasibility by LP and by the facet list must coincide on every target vector.
  const std::vector<VarPair> pairs{{0, 1}, {1, 2}, {0, 2}};
  const auto fs = enumerate_boole_facets(3, pairs);
  Rng rng(31);
  int infeasible = 0;
  for (int trial = 0; trial < 1200; ++trial) {
    std::vector<Rational> t;
    for (int k = 0; k < 3; ++k) t.push_back(Rational(static_cast<long long>(rng.next() % 41)) / 40);
    PolytopeInstance inst;
    inst.n_vars = 3;
    for (std::size_t k = 0; k < 3; ++k) inst.constraints.push_back({pairs[k].first, pairs[k].second, t[k]});
    const auto res = check_local_polytope(inst);
    const bool inside = std::all_of(fs.begin(), fs.end(), [&](const auto& f) { return f.lhs(t) >= f.bound; });
    ASSERT_EQ(res.feasible == Feasibility::feasible, inside) << trial;
    infeasible += !inside;
  }
  EXPECT_GT(infeasible, 0);
}
