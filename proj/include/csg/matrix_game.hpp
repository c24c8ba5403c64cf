#pragma once

// One-shot zero-sum matrix games over valuations: the Pre operators,
// optimal selectors with prescribed support, counter-optimal action sets,
// and the (support, counter-set) enumeration feeding the turn-based
// reduction. Everything reduces to small LPs; 1xN, Nx1, saddle-point and
// 2x2 games are solved in closed form before falling back to the simplex.

#include "csg/game.hpp"
#include "csg/lp.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csg {

template <class V>
using Matrix = std::vector<std::vector<V>>;

/// Payoff matrix of the one-shot game at s: M[a][b] = E_{delta(s,a,b)}[v].
template <class V>
Matrix<V> payoff_matrix(const ConcurrentGame<V>& g, const Valuation<V>& v, int s) {
  const int m1 = static_cast<int>(g.moves1[s].size());
  const int m2 = static_cast<int>(g.moves2[s].size());
  Matrix<V> M(m1, std::vector<V>(m2, V(0)));
  for (int a = 0; a < m1; ++a)
    for (int b = 0; b < m2; ++b)
      for (const auto& [t, w] : g.delta[s][a][b].entries) M[a][b] += w * v[t];
  return M;
}

template <class V>
struct MatrixGameResult {
  V value{};
  std::vector<V> row_mix;  // optimal mixed strategy for the maximizer
};

namespace detail {

/// Strips numerical dust from a mixed strategy and renormalizes.
template <class V>
Distribution<V> clean_mix(const std::vector<V>& x) {
  std::vector<std::pair<int, V>> entries;
  V floor = is_rational_backend<V> ? V(0) : V(1e-12);
  V total(0);
  for (int i = 0; i < static_cast<int>(x.size()); ++i)
    if (x[i] > floor) {
      entries.emplace_back(i, x[i]);
      total += x[i];
    }
  if (entries.empty()) throw std::runtime_error("degenerate mixed strategy");
  for (auto& [i, w] : entries) w /= total;
  return Distribution<V>(std::move(entries));
}

template <class V>
MatrixGameResult<V> matrix_game_simplex(const Matrix<V>& M) {
  const int m1 = static_cast<int>(M.size());
  const int m2 = static_cast<int>(M[0].size());
  // Shift payoffs to be nonnegative so the game value variable z stays >= 0.
  V shift(0);
  for (const auto& row : M)
    for (const V& e : row)
      if (e < shift) shift = e;
  // maximize z  s.t.  sum_a x_a (M[a][b] - shift) - z >= 0  for all b,
  //                   sum_a x_a = 1,  x >= 0, z >= 0.
  LpProblem<V> p;
  p.n = m1 + 1;
  p.c.assign(m1 + 1, V(0));
  p.c[m1] = V(1);
  for (int b = 0; b < m2; ++b) {
    std::vector<V> a(m1 + 1, V(0));
    for (int r = 0; r < m1; ++r) a[r] = M[r][b] - shift;
    a[m1] = V(-1);
    p.add(std::move(a), LpRel::ge, V(0));
  }
  std::vector<V> ones(m1 + 1, V(1));
  ones[m1] = V(0);
  p.add(std::move(ones), LpRel::eq, V(1));
  LpSolution<V> sol = lp_solve(p);
  if (sol.status != LpStatus::optimal)
    throw std::runtime_error("matrix game LP failed");
  MatrixGameResult<V> out;
  out.value = sol.objective + shift;
  out.row_mix.assign(sol.x.begin(), sol.x.begin() + m1);
  return out;
}

}  // namespace detail

/// Value and one optimal row strategy of the zero-sum matrix game M
/// (row player maximizes).
template <class V>
MatrixGameResult<V> matrix_game_value(const Matrix<V>& M) {
  const int m1 = static_cast<int>(M.size());
  const int m2 = static_cast<int>(M[0].size());
  if (m2 == 1) {
    int best = 0;
    for (int a = 1; a < m1; ++a)
      if (M[a][0] > M[best][0]) best = a;
    MatrixGameResult<V> out{M[best][0], std::vector<V>(m1, V(0))};
    out.row_mix[best] = V(1);
    return out;
  }
  if (m1 == 1) {
    V value = M[0][0];
    for (int b = 1; b < m2; ++b)
      if (M[0][b] < value) value = M[0][b];
    return {value, {V(1)}};
  }
  // Pure saddle point: maximin row guarantees the minimax value.
  int arow = 0;
  V maximin{};
  for (int a = 0; a < m1; ++a) {
    V rmin = M[a][0];
    for (int b = 1; b < m2; ++b)
      if (M[a][b] < rmin) rmin = M[a][b];
    if (a == 0 || rmin > maximin) {
      maximin = rmin;
      arow = a;
    }
  }
  V minimax{};
  for (int b = 0; b < m2; ++b) {
    V cmax = M[0][b];
    for (int a = 1; a < m1; ++a)
      if (M[a][b] > cmax) cmax = M[a][b];
    if (b == 0 || cmax < minimax) minimax = cmax;
  }
  if (maximin == minimax) {
    MatrixGameResult<V> out{maximin, std::vector<V>(m1, V(0))};
    out.row_mix[arow] = V(1);
    return out;
  }
  if (m1 == 2 && m2 == 2) {
    // No saddle: the unique equalizing mix is optimal.
    V denom = M[0][0] - M[0][1] - M[1][0] + M[1][1];
    if (denom != V(0)) {
      V p = (M[1][1] - M[1][0]) / denom;
      if (p > V(0) && p < V(1))
        return {(M[0][0] * M[1][1] - M[0][1] * M[1][0]) / denom, {p, V(1) - p}};
    }
  }
  return detail::matrix_game_simplex(M);
}

// ---------------------------------------------------------------------------
// Pre operators

/// Pre_{xi1,xi2}(v)(s): expected v at the successor under both selectors.
template <class V>
V pre_pair(const ConcurrentGame<V>& g, const Valuation<V>& v, int s, const Selector<V>& s1,
           const Selector<V>& s2) {
  check_selector(g, s1);
  check_selector(g, s2);
  V out(0);
  for (const auto& [a, wa] : s1.choice[s].entries)
    for (const auto& [b, wb] : s2.choice[s].entries)
      for (const auto& [t, p] : g.delta[s][a][b].entries) out += wa * wb * p * v[t];
  return out;
}

/// Pre_{1:xi1}(v)(s): the worst case over player 2, attained at a pure move.
template <class V>
V pre_one_sel(const ConcurrentGame<V>& g, const Valuation<V>& v, int s, const Selector<V>& s1) {
  check_selector(g, s1);
  Matrix<V> M = payoff_matrix(g, v, s);
  const int m2 = static_cast<int>(g.moves2[s].size());
  V best{};
  for (int b = 0; b < m2; ++b) {
    V e(0);
    for (const auto& [a, wa] : s1.choice[s].entries) e += wa * M[a][b];
    if (b == 0 || e < best) best = e;
  }
  return best;
}

template <class V>
struct PreResult {
  V value{};
  Distribution<V> selector;  // optimal player-1 mix at the state
};

/// Pre_1(v)(s): the matrix-game value at s, with one optimal selector entry.
template <class V>
PreResult<V> pre_one(const ConcurrentGame<V>& g, const Valuation<V>& v, int s) {
  MatrixGameResult<V> r;
  try {
    r = matrix_game_value(payoff_matrix(g, v, s));
  } catch (const std::exception& e) {
    throw std::runtime_error("pre_one failed at state '" + g.states[s] + "': " + e.what());
  }
  return {r.value, detail::clean_mix(r.row_mix)};
}

template <class V>
Valuation<V> pre_one_valuation(const ConcurrentGame<V>& g, const Valuation<V>& v) {
  Valuation<V> out(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) out[s] = pre_one(g, v, s).value;
  return out;
}

// ---------------------------------------------------------------------------
// Optimal selector supports and counter-optimal sets

/// Positivity floor standing in for the strict inequality xi(a) > 0.
template <class V>
inline V support_floor() {
  if constexpr (is_rational_backend<V>) return V(0);
  return V(1e-9);
}

namespace detail {

// Feasibility core: an optimal selector with support exactly A, maximizing
// the joint margin t of support positivity and (optionally) the strict gap
// Pre > value on the moves outside B. `restrict_counter` toggles the B
// constraints.
template <class V>
std::optional<Distribution<V>> support_witness(const Matrix<V>& M, const V& value,
                                               const IndexSet& A, const IndexSet* B,
                                               const Cmp<V>& cmp) {
  const int m2 = static_cast<int>(M[0].size());
  const int k = static_cast<int>(A.size());
  V opt_slack = is_rational_backend<V> ? V(0) : V(1e-11);
  // vars: xi_a for a in A, then t; maximize t
  LpProblem<V> p;
  p.n = k + 1;
  p.c.assign(k + 1, V(0));
  p.c[k] = V(1);
  {
    std::vector<V> row(k + 1, V(1));
    row[k] = V(0);
    p.add(std::move(row), LpRel::eq, V(1));
  }
  for (int i = 0; i < k; ++i) {
    std::vector<V> row(k + 1, V(0));
    row[i] = V(1);
    row[k] = V(-1);
    p.add(std::move(row), LpRel::ge, V(0));
  }
  for (int b = 0; b < m2; ++b) {
    std::vector<V> row(k + 1, V(0));
    for (int i = 0; i < k; ++i) row[i] = M[A[i]][b];
    if (B != nullptr && !set_contains(*B, b)) {
      row[k] = V(-1);  // Pre(b) >= value + t
      p.add(std::move(row), LpRel::ge, value);
    } else {
      p.add(std::move(row), LpRel::ge, value - opt_slack);
      if (B != nullptr) {
        // counter-optimal moves must stay tight: Pre(b) <= value (+ tol)
        std::vector<V> up(k + 1, V(0));
        for (int i = 0; i < k; ++i) up[i] = M[A[i]][b];
        p.add(std::move(up), LpRel::le, value + cmp.tol);
      }
    }
  }
  LpSolution<V> sol = lp_solve(p);
  if (sol.status != LpStatus::optimal) return std::nullopt;
  bool strict = is_rational_backend<V> ? sol.x[k] > V(0) : sol.x[k] >= support_floor<V>();
  if (!strict) return std::nullopt;
  const int m1 = static_cast<int>(M.size());
  std::vector<V> full(m1, V(0));
  for (int i = 0; i < k; ++i) full[A[i]] = sol.x[i];
  return clean_mix(full);
}

// Nonempty subsets of {0..m-1} in (cardinality, lexicographic) order.
inline std::vector<IndexSet> subsets_by_size(int m) {
  std::vector<IndexSet> out;
  for (int k = 1; k <= m; ++k) {
    IndexSet comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      out.push_back(comb);
      int i = k - 1;
      while (i >= 0 && comb[i] == m - k + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return out;
}

}  // namespace detail

/// An optimal selector at s with support exactly A (all weights strictly
/// positive), or nullopt when no such selector exists.
template <class V>
std::optional<Distribution<V>> opt_sel_with_support(const ConcurrentGame<V>& g,
                                                    const Valuation<V>& v, int s,
                                                    const IndexSet& A, const Cmp<V>& cmp = {}) {
  if (A.empty()) throw std::invalid_argument("opt_sel_with_support: empty support");
  Matrix<V> M = payoff_matrix(g, v, s);
  V value = matrix_game_value(M).value;
  return detail::support_witness(M, value, A, nullptr, cmp);
}

/// CountOpt(v, s, xi1): the player-2 moves that attain Pre_1(v)(s) against
/// the optimal selector xi1. Throws when xi1 is not optimal.
template <class V>
IndexSet counter_optimal(const ConcurrentGame<V>& g, const Valuation<V>& v, int s,
                         const Selector<V>& s1, const Cmp<V>& cmp = {}) {
  Matrix<V> M = payoff_matrix(g, v, s);
  V value = matrix_game_value(M).value;
  const int m2 = static_cast<int>(M[0].size());
  IndexSet B;
  V guaranteed{};
  for (int b = 0; b < m2; ++b) {
    V e(0);
    for (const auto& [a, wa] : s1.choice[s].entries) e += wa * M[a][b];
    if (b == 0 || e < guaranteed) guaranteed = e;
    if (cmp.le(e, value)) B.push_back(b);
  }
  if (!cmp.eq(guaranteed, value))
    throw std::runtime_error("counter_optimal: selector is not optimal at state '" +
                             g.states[s] + "'");
  return B;
}

/// One realizable (support, counter-set) pair with its witness selector.
template <class V>
struct SupportPair {
  IndexSet support1;        // A, player-1 move indices
  IndexSet counter2;        // B, player-2 move indices
  Distribution<V> witness;  // optimal selector with supp = A, CountOpt = B
};

/// OptSelCount(v, s): all pairs (A, B) such that some optimal selector has
/// support exactly A and counter-optimal set exactly B. Exponential in the
/// number of moves at s, guarded.
template <class V>
std::vector<SupportPair<V>> opt_sel_count(const ConcurrentGame<V>& g, const Valuation<V>& v,
                                          int s, const Cmp<V>& cmp = {}) {
  const int m1 = static_cast<int>(g.moves1[s].size());
  const int m2 = static_cast<int>(g.moves2[s].size());
  if (m1 + m2 > 24)
    throw std::runtime_error("opt_sel_count enumeration guard: state '" + g.states[s] +
                             "' has " + std::to_string(m1 + m2) + " combined moves (max 24)");
  Matrix<V> M = payoff_matrix(g, v, s);
  V value = matrix_game_value(M).value;

  std::vector<SupportPair<V>> out;
  const auto bsets = detail::subsets_by_size(m2);
  for (const IndexSet& A : detail::subsets_by_size(m1)) {
    auto witness = detail::support_witness(M, value, A, nullptr, cmp);
    if (!witness) continue;  // no optimal selector with this support
    Selector<V> tmp;
    tmp.player = 1;
    tmp.choice.assign(g.num_states(), Distribution<V>::point(0));
    tmp.choice[s] = *witness;
    IndexSet B0 = counter_optimal(g, v, s, tmp, cmp);
    out.push_back({A, B0, *witness});
    for (const IndexSet& B : bsets) {
      if (B == B0) continue;
      auto w = detail::support_witness(M, value, A, &B, cmp);
      if (w) out.push_back({A, B, *w});
    }
  }
  return out;
}

}  // namespace csg
