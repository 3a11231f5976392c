#pragma once

// Phase-one simplex for {x >= 0 : A x = b} with b >= 0. Dense tableau,
// Bland's rule (the vertex-weight problems here are highly degenerate).

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bellkit/polytope.hpp"

namespace bellkit::detail {

template <class T>
struct Sign;

template <>
struct Sign<Rational> {
  static bool positive(const Rational& x) { return x > 0; }
  static bool negative(const Rational& x) { return x < 0; }
};

template <>
struct Sign<double> {
  static constexpr double eps = 1e-12;
  static bool positive(double x) { return x > eps; }
  static bool negative(double x) { return x < -eps; }
};

template <class T>
struct PhaseOneResult {
  /// Minimum total artificial weight.
  T infeasibility{};
  /// Structural solution at the optimum.
  std::vector<T> x;
  /// Row multipliers y with y^T A_j <= 0 for every column and y^T b equal
  /// to `infeasibility`; -y is a Farkas certificate when it is positive.
  std::vector<T> y;
};

template <class T>
class PhaseOne {
public:
  PhaseOne(const std::vector<std::vector<T>>& a, const std::vector<T>& b)
      : m_(a.size()), n_(a.empty() ? 0 : a.front().size()), width_(n_ + m_ + 1) {
    if (b.size() != m_) throw std::invalid_argument("phase one: row count mismatch");
    tab_.assign((m_ + 1) * width_, T(0));
    basis_.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (a[r].size() != n_) throw std::invalid_argument("phase one: ragged matrix");
      if (Sign<T>::negative(b[r])) throw std::invalid_argument("phase one: needs b >= 0");
      for (std::size_t j = 0; j < n_; ++j) at(r, j) = a[r][j];
      at(r, n_ + r) = T(1);
      at(r, width_ - 1) = b[r];
      basis_[r] = n_ + r;
    }
    // Objective row: reduced costs of sum(artificials) with the artificial
    // basis priced out.
    for (std::size_t j = 0; j < width_; ++j) {
      if (j >= n_ && j < n_ + m_) continue;
      T s(0);
      for (std::size_t r = 0; r < m_; ++r) s -= at(r, j);
      at(m_, j) = s;
    }
  }

  PhaseOneResult<T> solve() {
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (Sign<T>::negative(at(m_, j))) {
          enter = j;
          break;
        }
      if (enter == n_) break;

      std::size_t leave = m_;
      T best{};
      for (std::size_t r = 0; r < m_; ++r) {
        if (!Sign<T>::positive(at(r, enter))) continue;
        T ratio = at(r, width_ - 1) / at(r, enter);
        if (leave == m_ || ratio < best || (ratio == best && basis_[r] < basis_[leave])) {
          leave = r;
          best = ratio;
        }
      }
      // Bounded below by zero, so the phase-one objective is never unbounded.
      if (leave == m_) throw std::logic_error("phase one: unbounded direction");
      pivot(leave, enter);
    }

    PhaseOneResult<T> out;
    out.infeasibility = -at(m_, width_ - 1);
    out.x.assign(n_, T(0));
    for (std::size_t r = 0; r < m_; ++r)
      if (basis_[r] < n_) out.x[basis_[r]] = at(r, width_ - 1);
    out.y.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) out.y[r] = T(1) - at(m_, n_ + r);
    return out;
  }

private:
  T& at(std::size_t r, std::size_t c) { return tab_[r * width_ + c]; }

  void pivot(std::size_t row, std::size_t col) {
    const T pv = at(row, col);
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j)
      if (at(row, j) != T(0)) {
        at(row, j) /= pv;
        nonzero_.push_back(j);
      }
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == row) continue;
      const T f = at(r, col);
      if (f == T(0)) continue;
      for (std::size_t j : nonzero_) at(r, j) -= f * at(row, j);
    }
    basis_[row] = col;
  }

  std::size_t m_, n_, width_;
  std::vector<T> tab_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace bellkit::detail
