#pragma once

// Quantitative MDP and Markov-chain analysis: exact chain reachability by
// Gaussian elimination, the MDP reachability LP (simplex in floating mode,
// policy iteration with exact solves in rational mode), maximal end
// components, fixed-strategy game values and properness of selectors.

#include "csg/game.hpp"
#include "csg/lp.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace csg {

namespace detail {

template <class V>
V vabs(const V& x) {
  return x < V(0) ? -x : x;
}

/// Dense linear solve by Gaussian elimination with partial pivoting.
template <class V>
std::vector<V> gauss_solve(std::vector<std::vector<V>> a, std::vector<V> b) {
  const int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (vabs(a[r][col]) > vabs(a[piv][col])) piv = r;
    if (a[piv][col] == V(0)) throw std::runtime_error("singular linear system");
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == V(0)) continue;
      V f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<V> x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

/// States that can reach `target` in the directed graph given by `succ`.
inline std::vector<bool> backward_reach(const std::vector<IndexSet>& succ, const IndexSet& target) {
  const int n = static_cast<int>(succ.size());
  std::vector<std::vector<int>> pred(n);
  for (int s = 0; s < n; ++s)
    for (int t : succ[s]) pred[t].push_back(s);
  std::vector<bool> seen(n, false);
  std::vector<int> stack;
  for (int t : target)
    if (!seen[t]) {
      seen[t] = true;
      stack.push_back(t);
    }
  while (!stack.empty()) {
    int t = stack.back();
    stack.pop_back();
    for (int s : pred[t])
      if (!seen[s]) {
        seen[s] = true;
        stack.push_back(s);
      }
  }
  return seen;
}

}  // namespace detail

/// Least solution of x = 1 on T, x(s) = sum_t chain(s)(t) x(t) elsewhere,
/// with x = 0 on states that cannot reach T. Exact in rational mode.
template <class V>
Valuation<V> chain_reach(const MarkovChain<V>& chain, const IndexSet& T) {
  const int n = chain.num_states();
  std::vector<IndexSet> succ(n);
  for (int s = 0; s < n; ++s) succ[s] = chain.rows[s].support();
  std::vector<bool> reach = detail::backward_reach(succ, T);

  Valuation<V> x(n, V(0));
  for (int t : T) x[t] = V(1);
  std::vector<int> unknown;
  for (int s = 0; s < n; ++s)
    if (reach[s] && !set_contains(T, s)) unknown.push_back(s);
  if (unknown.empty()) return x;

  const int m = static_cast<int>(unknown.size());
  std::vector<int> pos(n, -1);
  for (int i = 0; i < m; ++i) pos[unknown[i]] = i;
  std::vector<std::vector<V>> a(m, std::vector<V>(m, V(0)));
  std::vector<V> b(m, V(0));
  for (int i = 0; i < m; ++i) {
    a[i][i] = V(1);
    for (const auto& [t, p] : chain.rows[unknown[i]].entries) {
      if (set_contains(T, t))
        b[i] += p;
      else if (pos[t] >= 0)
        a[i][pos[t]] -= p;
      // mass to non-reaching states contributes zero
    }
  }
  std::vector<V> sol = detail::gauss_solve(std::move(a), std::move(b));
  for (int i = 0; i < m; ++i) x[unknown[i]] = sol[i];
  return x;
}

template <class V>
struct MdpSolve {
  Valuation<V> values;
  Selector<V> witness;  // pure selector for the decision player
};

namespace detail {

template <class V>
MarkovChain<V> chain_of_policy(const Mdp<V>& mdp, const std::vector<int>& policy) {
  MarkovChain<V> chain;
  chain.rows.resize(mdp.num_states());
  for (int s = 0; s < mdp.num_states(); ++s) chain.rows[s] = mdp.trans(s, policy[s]);
  return chain;
}

// Greedy witness extraction in floating mode: among value-optimal actions,
// follow layers of positive progress toward T so the selector actually
// realizes the LP values.
template <class V>
std::vector<int> extract_witness(const Mdp<V>& mdp, const Valuation<V>& x, const IndexSet& T,
                                 const std::vector<bool>& reach) {
  const int n = mdp.num_states();
  std::vector<int> policy(n, 0);
  std::vector<bool> layered(n, false);
  for (int t : T) layered[t] = true;
  V tol = is_rational_backend<V> ? V(0) : V(1e-9);
  bool grew = true;
  while (grew) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      if (layered[s] || !reach[s] || set_contains(T, s)) continue;
      for (int m = 0; m < mdp.num_moves(s); ++m) {
        V q(0);
        bool progress = false;
        for (const auto& [t, p] : mdp.trans(s, m).entries) {
          q += p * x[t];
          if (layered[t]) progress = true;
        }
        if (progress && detail::vabs(q - x[s]) <= tol) {
          policy[s] = m;
          layered[s] = true;
          grew = true;
          break;
        }
      }
    }
  }
  return policy;
}

}  // namespace detail

/// Maximal reachability value of the MDP's decision player, with a pure
/// memoryless witness. Floating mode prunes value-zero states and solves
/// the reachability LP by simplex; rational mode runs policy iteration
/// with exact chain solves.
template <class V>
MdpSolve<V> mdp_reach_value(const Mdp<V>& mdp, const IndexSet& T) {
  const int n = mdp.num_states();
  std::vector<IndexSet> succ(n);
  for (int s = 0; s < n; ++s) {
    IndexSet u;
    for (int m = 0; m < mdp.num_moves(s); ++m)
      for (const auto& [t, p] : mdp.trans(s, m).entries) u.push_back(t);
    succ[s] = set_sorted(std::move(u));
  }
  std::vector<bool> reach = detail::backward_reach(succ, T);

  MdpSolve<V> out;
  out.witness.player = mdp.decision_player;
  if constexpr (is_rational_backend<V>) {
    std::vector<int> policy(n, 0);
    MarkovChain<V> chain = detail::chain_of_policy(mdp, policy);
    Valuation<V> x = chain_reach(chain, T);
    for (bool improved = true; improved;) {
      improved = false;
      for (int s = 0; s < n; ++s) {
        if (set_contains(T, s) || !reach[s]) continue;
        int best = -1;
        V bestq{};
        for (int m = 0; m < mdp.num_moves(s); ++m) {
          V q(0);
          for (const auto& [t, p] : mdp.trans(s, m).entries) q += p * x[t];
          if (best < 0 || q > bestq) {
            best = m;
            bestq = q;
          }
        }
        if (bestq > x[s] && best != policy[s]) {
          policy[s] = best;
          improved = true;
        }
      }
      if (improved) x = chain_reach(detail::chain_of_policy(mdp, policy), T);
    }
    out.values = std::move(x);
    out.witness.choice.resize(n);
    for (int s = 0; s < n; ++s) out.witness.choice[s] = Distribution<V>::point(policy[s]);
    return out;
  } else {
    std::vector<int> unknown;
    for (int s = 0; s < n; ++s)
      if (reach[s] && !set_contains(T, s)) unknown.push_back(s);
    Valuation<V> x(n, V(0));
    for (int t : T) x[t] = V(1);
    if (!unknown.empty()) {
      const int m = static_cast<int>(unknown.size());
      std::vector<int> pos(n, -1);
      for (int i = 0; i < m; ++i) pos[unknown[i]] = i;
      // minimize sum x  s.t.  x(s) >= sum_t x(t) delta(s,a)(t), 0 <= x <= 1
      LpProblem<V> p;
      p.n = m;
      p.c.assign(m, V(-1));
      for (int i = 0; i < m; ++i) {
        int s = unknown[i];
        for (int mv = 0; mv < mdp.num_moves(s); ++mv) {
          std::vector<V> row(m, V(0));
          row[i] = V(1);
          V rhs(0);
          for (const auto& [t, pr] : mdp.trans(s, mv).entries) {
            if (set_contains(T, t))
              rhs += pr;
            else if (pos[t] >= 0)
              row[pos[t]] -= pr;
          }
          p.add(std::move(row), LpRel::ge, rhs);
        }
        std::vector<V> cap(m, V(0));
        cap[i] = V(1);
        p.add(std::move(cap), LpRel::le, V(1));
      }
      LpSolution<V> sol = lp_solve(p);
      if (sol.status != LpStatus::optimal)
        throw std::runtime_error("mdp_reach_value: reachability LP failed");
      for (int i = 0; i < m; ++i) x[unknown[i]] = sol.x[i];
    }
    std::vector<int> policy = detail::extract_witness(mdp, x, T, reach);
    out.values = std::move(x);
    out.witness.choice.resize(n);
    for (int s = 0; s < n; ++s) out.witness.choice[s] = Distribution<V>::point(policy[s]);
    return out;
  }
}

// ---------------------------------------------------------------------------
// End components

/// Sub-MDP that is closed under its chosen actions and strongly connected.
struct EndComponent {
  IndexSet states;
  std::vector<IndexSet> actions;  // per state (parallel to `states`)
};

namespace detail {

// Kosaraju SCC on the subgraph induced by alive states / allowed actions.
template <class V>
std::vector<int> scc_ids(const Mdp<V>& mdp, const std::vector<bool>& alive,
                         const std::vector<IndexSet>& allowed) {
  const int n = mdp.num_states();
  std::vector<IndexSet> adj(n), radj(n);
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    IndexSet u;
    for (int m : allowed[s])
      for (const auto& [t, p] : mdp.trans(s, m).entries) u.push_back(t);
    adj[s] = set_sorted(std::move(u));
    for (int t : adj[s]) radj[t].push_back(s);
  }
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  for (int s0 = 0; s0 < n; ++s0) {
    if (!alive[s0] || seen[s0]) continue;
    // iterative DFS recording finish order
    std::vector<std::pair<int, std::size_t>> stack = {{s0, 0}};
    seen[s0] = true;
    while (!stack.empty()) {
      auto& [s, i] = stack.back();
      if (i < adj[s].size()) {
        int t = adj[s][i++];
        if (alive[t] && !seen[t]) {
          seen[t] = true;
          stack.emplace_back(t, 0);
        }
      } else {
        order.push_back(s);
        stack.pop_back();
      }
    }
  }
  std::vector<int> id(n, -1);
  int next = 0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (id[*it] >= 0) continue;
    std::vector<int> stack = {*it};
    id[*it] = next;
    while (!stack.empty()) {
      int t = stack.back();
      stack.pop_back();
      for (int s : radj[t])
        if (alive[s] && id[s] < 0) {
          id[s] = next;
          stack.push_back(s);
        }
    }
    ++next;
  }
  return id;
}

}  // namespace detail

/// Maximal end components, by iterated SCC decomposition with action pruning.
template <class V>
std::vector<EndComponent> max_end_components(const Mdp<V>& mdp) {
  const int n = mdp.num_states();
  std::vector<bool> alive(n, true);
  std::vector<IndexSet> allowed(n);
  for (int s = 0; s < n; ++s)
    for (int m = 0; m < mdp.num_moves(s); ++m) allowed[s].push_back(m);

  std::vector<int> id;
  for (bool changed = true; changed;) {
    changed = false;
    id = detail::scc_ids(mdp, alive, allowed);
    for (int s = 0; s < n; ++s) {
      if (!alive[s]) continue;
      IndexSet keep;
      for (int m : allowed[s]) {
        bool inside = true;
        for (const auto& [t, p] : mdp.trans(s, m).entries)
          if (!alive[t] || id[t] != id[s]) {
            inside = false;
            break;
          }
        if (inside) keep.push_back(m);
      }
      if (keep.size() != allowed[s].size()) changed = true;
      allowed[s] = std::move(keep);
      if (allowed[s].empty() && alive[s]) {
        alive[s] = false;
        changed = true;
      }
    }
  }

  std::vector<EndComponent> out;
  std::vector<int> comp_of(n, -1);
  for (int s = 0; s < n; ++s) {
    if (!alive[s]) continue;
    int c = -1;
    for (std::size_t k = 0; k < out.size(); ++k)
      if (!out[k].states.empty() && id[out[k].states[0]] == id[s]) c = static_cast<int>(k);
    if (c < 0) {
      out.push_back({});
      c = static_cast<int>(out.size()) - 1;
    }
    out[c].states.push_back(s);
    out[c].actions.push_back(allowed[s]);
    comp_of[s] = c;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fixed-strategy values and properness

/// True iff every end component of the player-2 MDP G_{xi1} meets `goal`;
/// equivalently, every pure player-2 selector reaches goal almost surely.
template <class V>
bool is_proper(const ConcurrentGame<V>& g, const Selector<V>& s1, const IndexSet& goal) {
  Mdp<V> mdp = fix_selector(g, s1);
  for (const EndComponent& ec : max_end_components(mdp))
    if (set_intersection(ec.states, goal).empty()) return false;
  return true;
}

/// Value of Safe(F) under the fixed player-1 selector: the opponent's best
/// reply maximizes the probability of reaching S \ F.
template <class V>
Valuation<V> safety_value_of_selector(const ConcurrentGame<V>& g, const Selector<V>& gamma,
                                      const IndexSet& F) {
  IndexSet T = set_complement(F, g.num_states());
  MdpSolve<V> r = mdp_reach_value(fix_selector(g, gamma), T);
  Valuation<V> v(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) v[s] = V(1) - r.values[s];
  return v;
}

/// Value of Reach(T) under a proper fixed player-1 selector, with the
/// value-zero region W2 already absorbed: the opponent's best reply
/// maximizes the probability of reaching W2.
template <class V>
Valuation<V> reach_value_of_selector(const ConcurrentGame<V>& g, const Selector<V>& s1,
                                     const IndexSet& T, const IndexSet& W2) {
  for (int s : set_union(T, W2))
    if (!g.is_absorbing(s))
      throw std::invalid_argument("reach_value_of_selector: state '" + g.states[s] +
                                  "' in T or W2 is not absorbing");
  IndexSet goal = set_union(T, W2);
  Mdp<V> mdp = fix_selector(g, s1);
  for (const EndComponent& ec : max_end_components(mdp)) {
    if (set_intersection(ec.states, goal).empty()) {
      std::string names;
      for (int s : ec.states) names += (names.empty() ? "" : ",") + g.states[s];
      throw std::runtime_error("reach_value_of_selector: selector is not proper, end component {" +
                               names + "} avoids the goal");
    }
  }
  MdpSolve<V> r = mdp_reach_value(mdp, W2);
  Valuation<V> v(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) v[s] = V(1) - r.values[s];
  return v;
}

}  // namespace csg
