#pragma once

// Small dense linear programs solved by two-phase primal simplex with
// Bland's anti-cycling rule. Pivots are exact in rational mode; in floating
// mode a fixed pivot tolerance is used. Sized for the tiny LPs of matrix
// games and MDP reachability, not for anything large.

#include "csg/numeric.hpp"

#include <stdexcept>
#include <vector>

namespace csg {

enum class LpStatus { optimal, infeasible, unbounded };

enum class LpRel { le, ge, eq };

template <class V>
struct LpRow {
  std::vector<V> a;
  LpRel rel;
  V rhs;
};

/// maximize c.x subject to the rows, x >= 0.
template <class V>
struct LpProblem {
  int n = 0;
  std::vector<V> c;
  std::vector<LpRow<V>> rows;

  void add(std::vector<V> a, LpRel rel, V rhs) { rows.push_back({std::move(a), rel, rhs}); }
};

template <class V>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  V objective{};
  std::vector<V> x;
};

template <class V>
inline V lp_pivot_eps() {
  if constexpr (is_rational_backend<V>) return V(0);
  return V(1e-11);
}

namespace detail {

template <class V>
class SimplexTableau {
 public:
  SimplexTableau(const LpProblem<V>& p, const V& eps) : eps_(eps), n_(p.n) {
    const int m = static_cast<int>(p.rows.size());
    // Column layout: structural vars, then one slack/surplus per inequality,
    // then artificials; RHS kept separately.
    int extra = 0;
    for (const auto& r : p.rows)
      if (r.rel != LpRel::eq) ++extra;
    slack_base_ = n_;
    art_base_ = n_ + extra;
    cols_ = art_base_;  // artificials appended below
    tab_.assign(m, std::vector<V>(cols_, V(0)));
    rhs_.assign(m, V(0));
    basis_.assign(m, -1);

    int next_slack = slack_base_;
    for (int i = 0; i < m; ++i) {
      const auto& r = p.rows[i];
      V sign = V(1);
      LpRel rel = r.rel;
      if (r.rhs < V(0)) {  // normalize rhs >= 0
        sign = V(-1);
        if (rel == LpRel::le)
          rel = LpRel::ge;
        else if (rel == LpRel::ge)
          rel = LpRel::le;
      }
      for (int j = 0; j < n_ && j < static_cast<int>(r.a.size()); ++j) tab_[i][j] = sign * r.a[j];
      rhs_[i] = sign * r.rhs;
      if (r.rel != LpRel::eq) {
        V s = rel == LpRel::le ? V(1) : V(-1);
        tab_[i][next_slack] = s;
        if (rel == LpRel::le) basis_[i] = next_slack;
        ++next_slack;
      }
      if (basis_[i] < 0) {  // needs an artificial
        for (auto& row : tab_) row.push_back(V(0));
        tab_[i][cols_] = V(1);
        basis_[i] = cols_;
        ++cols_;
      }
    }
  }

  LpSolution<V> solve(const std::vector<V>& c) {
    // Phase 1: drive artificials to zero.
    if (cols_ > art_base_) {
      std::vector<V> phase1(cols_, V(0));
      for (int j = art_base_; j < cols_; ++j) phase1[j] = V(-1);
      if (!iterate(phase1, /*allow_art=*/true)) return {LpStatus::unbounded, V(0), {}};
      V art_sum(0);
      for (std::size_t i = 0; i < basis_.size(); ++i)
        if (basis_[i] >= art_base_) art_sum += rhs_[i];
      if (art_sum > eps_) return {LpStatus::infeasible, V(0), {}};
      evict_artificials();
    }
    std::vector<V> cost(cols_, V(0));
    for (int j = 0; j < n_ && j < static_cast<int>(c.size()); ++j) cost[j] = c[j];
    if (!iterate(cost, /*allow_art=*/false)) return {LpStatus::unbounded, V(0), {}};
    LpSolution<V> sol;
    sol.status = LpStatus::optimal;
    sol.x.assign(n_, V(0));
    for (std::size_t i = 0; i < basis_.size(); ++i)
      if (basis_[i] < n_) sol.x[basis_[i]] = rhs_[i];
    sol.objective = V(0);
    for (int j = 0; j < n_; ++j) sol.objective += cost[j] * sol.x[j];
    return sol;
  }

 private:
  // Bland's rule: entering = lowest-index column with positive reduced cost,
  // leaving = min ratio with lowest basis index on ties.
  bool iterate(const std::vector<V>& cost, bool allow_art) {
    const int m = static_cast<int>(tab_.size());
    for (int round = 0;; ++round) {
      if (round > 10000 + 200 * (m + cols_))
        throw std::runtime_error("simplex failed to converge");
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (!allow_art && j >= art_base_) break;
        if (is_basic(j)) continue;
        V r = cost[j];
        for (int i = 0; i < m; ++i) r -= cost[basis_[i]] * tab_[i][j];
        if (r > eps_) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      V best_ratio(0);
      for (int i = 0; i < m; ++i) {
        if (tab_[i][enter] > eps_) {
          V ratio = rhs_[i] / tab_[i][enter];
          if (leave < 0 || ratio < best_ratio ||
              (ratio == best_ratio && basis_[i] < basis_[leave])) {
            leave = i;
            best_ratio = ratio;
          }
        }
      }
      if (leave < 0) return false;  // unbounded
      pivot(leave, enter);
    }
  }

  bool is_basic(int j) const {
    for (int b : basis_)
      if (b == j) return true;
    return false;
  }

  void pivot(int row, int col) {
    const int m = static_cast<int>(tab_.size());
    V p = tab_[row][col];
    for (auto& v : tab_[row]) v /= p;
    rhs_[row] /= p;
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      V f = tab_[i][col];
      if (f == V(0)) continue;
      for (int j = 0; j < cols_; ++j) tab_[i][j] -= f * tab_[row][j];
      rhs_[i] -= f * rhs_[row];
    }
    basis_[row] = col;
  }

  void evict_artificials() {
    const int m = static_cast<int>(tab_.size());
    for (int i = 0; i < m; ++i) {
      if (basis_[i] < art_base_) continue;
      int col = -1;
      for (int j = 0; j < art_base_; ++j) {
        V a = tab_[i][j] < V(0) ? -tab_[i][j] : tab_[i][j];
        if (a > eps_ && !is_basic(j)) {
          col = j;
          break;
        }
      }
      if (col >= 0) pivot(i, col);
      // else: redundant row, artificial stays basic at zero
    }
  }

  V eps_;
  int n_;
  int slack_base_;
  int art_base_;
  int cols_;
  std::vector<std::vector<V>> tab_;
  std::vector<V> rhs_;
  std::vector<int> basis_;
};

}  // namespace detail

template <class V>
LpSolution<V> lp_solve(const LpProblem<V>& p) {
  detail::SimplexTableau<V> t(p, lp_pivot_eps<V>());
  return t.solve(p.c);
}

}  // namespace csg
