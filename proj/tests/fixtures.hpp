#pragma once

// Shared fixtures, random game generators and independent oracles for the
// unit and acceptance suites.

#include "csg/csg.hpp"

#include <random>

namespace fixtures {

using namespace csg;

// ---------------------------------------------------------------------------
// HIDE: three-state concurrent matching game. At `field` the players pick
// l/r vs L/R; matching choices get caught, mismatches escape home. home and
// caught are absorbing. With the safety objective F = {home, field} the
// field value is 1/2 by symmetry and W1 = {home}.
template <class V>
ConcurrentGame<V> hide() {
  ConcurrentGame<V> g;
  g.states = {"home", "field", "caught"};
  g.moves1 = {{"stay"}, {"l", "r"}, {"stay"}};
  g.moves2 = {{"stay"}, {"L", "R"}, {"stay"}};
  auto pt = [](int t) { return Distribution<V>::point(t); };
  g.delta = {
      {{pt(0)}},
      {{pt(2), pt(0)},   // l vs L -> caught, l vs R -> home
       {pt(0), pt(2)}},  // r vs L -> home,   r vs R -> caught
      {{pt(2)}},
  };
  return g;
}

inline IndexSet hide_safe_set() { return {0, 1}; }  // avoid caught

// ---------------------------------------------------------------------------
// EX1: reconstruction of the turn-based safety game where Pre-based
// improvement alone stalls. Safety = avoid s6.
//
//   s0 (player 1) -> {s1, s2}
//   s1 (player 2) -> {s0, s3}
//   s2 (random)   -> s4 w.p. 1/3, s6 w.p. 2/3
//   s3 (random)   -> s5 w.p. 2/3, s6 w.p. 1/3
//   s4, s5        safe sinks; s6 bad sink
//
// Under the stalling strategy s0->s2 (player 2 answering s1->s0) the value
// at s0, s1, s2 is 1/3 and Pre_1 improves nothing, because both successors
// of s0 sit in the 1/3 value class. The almost-sure analysis of the
// turn-based reduction discovers that player 1 can hold the 1/3 class by
// switching to s0->s1, forcing player 2 to escape through s3, which lifts
// the value at s0 to 2/3.
template <class V>
TurnBasedGame<V> ex1() {
  TurnBasedGame<V> g;
  g.states = {"s0", "s1", "s2", "s3", "s4", "s5", "s6"};
  g.owner = {Owner::player1, Owner::player2, Owner::random, Owner::random,
             Owner::player1, Owner::player1, Owner::player1};
  g.edges = {{1, 2}, {0, 3}, {4, 6}, {5, 6}, {4}, {5}, {6}};
  g.dist.resize(7);
  g.dist[2] = Distribution<V>({{4, V(1) / V(3)}, {6, V(2) / V(3)}});
  g.dist[3] = Distribution<V>({{5, V(2) / V(3)}, {6, V(1) / V(3)}});
  return g;
}

inline IndexSet ex1_safe_set() { return {0, 1, 2, 3, 4, 5}; }  // avoid s6

// ---------------------------------------------------------------------------
// Random generators (all deterministic under the caller's seeded engine)

inline int rand_int(std::mt19937& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

/// Random dyadic distribution over a nonempty target set: weights are
/// positive multiples of 1/8.
template <class V>
Distribution<V> random_dyadic_dist(std::mt19937& rng, const IndexSet& targets) {
  const int k = static_cast<int>(targets.size());
  // composition of 8 into k positive parts
  std::vector<int> cuts = {0, 8};
  while (static_cast<int>(cuts.size()) < k + 1) {
    int c = rand_int(rng, 1, 7);
    bool dup = false;
    for (int x : cuts) dup |= x == c;
    if (!dup) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<int, V>> entries;
  for (int i = 0; i < k; ++i)
    entries.emplace_back(targets[i], V(cuts[i + 1] - cuts[i]) / V(8));
  return Distribution<V>(std::move(entries));
}

inline IndexSet random_subset(std::mt19937& rng, int n, int max_size) {
  IndexSet pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::shuffle(pool.begin(), pool.end(), rng);
  int size = rand_int(rng, 1, std::min(n, max_size));
  pool.resize(size);
  return set_sorted(std::move(pool));
}

/// Nonempty proper subset of {0..n-1}.
inline IndexSet random_proper_subset(std::mt19937& rng, int n) {
  IndexSet s = random_subset(rng, n, n - 1);
  return s;
}

template <class V>
ConcurrentGame<V> random_concurrent(std::mt19937& rng, int max_states = 5, int max_moves = 3) {
  ConcurrentGame<V> g;
  const int n = rand_int(rng, 2, max_states);
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  g.moves1.resize(n);
  g.moves2.resize(n);
  g.delta.resize(n);
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  for (int s = 0; s < n; ++s) {
    int m1 = rand_int(rng, 1, max_moves), m2 = rand_int(rng, 1, max_moves);
    for (int i = 0; i < m1; ++i) g.moves1[s].push_back(names[i]);
    for (int i = 0; i < m2; ++i) g.moves2[s].push_back(names[i]);
    g.delta[s].assign(m1, std::vector<Distribution<V>>(m2));
    for (int a = 0; a < m1; ++a)
      for (int b = 0; b < m2; ++b)
        g.delta[s][a][b] = random_dyadic_dist<V>(rng, random_subset(rng, n, 3));
  }
  return g;
}

template <class V>
TurnBasedGame<V> random_turn_based(std::mt19937& rng, int max_states = 5, int max_edges = 3) {
  TurnBasedGame<V> g;
  const int n = rand_int(rng, 2, max_states);
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  g.edges.resize(n);
  g.dist.resize(n);
  for (int s = 0; s < n; ++s) {
    switch (rand_int(rng, 0, 2)) {
      case 0: g.owner.push_back(Owner::player1); break;
      case 1: g.owner.push_back(Owner::player2); break;
      default: g.owner.push_back(Owner::random); break;
    }
    g.edges[s] = random_subset(rng, n, max_edges);
    if (g.owner[s] == Owner::random) g.dist[s] = random_dyadic_dist<V>(rng, g.edges[s]);
  }
  return g;
}

/// Random binary turn-based game: random states have at most two successors,
/// split half/half.
template <class V>
TurnBasedGame<V> random_binary_tb(std::mt19937& rng, int max_sr = 4) {
  TurnBasedGame<V> g;
  const int n = rand_int(rng, 3, 6);
  const int sr = rand_int(rng, 1, std::min(max_sr, n - 1));
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  g.edges.resize(n);
  g.dist.resize(n);
  for (int s = 0; s < n; ++s) {
    if (s < sr) {
      g.owner.push_back(Owner::random);
      g.edges[s] = random_subset(rng, n, 2);
      if (g.edges[s].size() == 1)
        g.dist[s] = Distribution<V>::point(g.edges[s][0]);
      else
        g.dist[s] = Distribution<V>({{g.edges[s][0], V(1) / V(2)}, {g.edges[s][1], V(1) / V(2)}});
    } else {
      g.owner.push_back(rand_int(rng, 0, 1) == 0 ? Owner::player1 : Owner::player2);
      g.edges[s] = random_subset(rng, n, 3);
    }
  }
  return g;
}

/// Concurrent game with a safe sink (state 0), a bad sink (last state) and
/// interior states where player 1 has real choices. Much likelier than the
/// fully random family to have fractional safety values and genuine
/// improvement steps.
template <class V>
ConcurrentGame<V> random_safety_game(std::mt19937& rng, int max_states = 5, int max_moves = 3) {
  ConcurrentGame<V> g;
  const int n = rand_int(rng, 4, max_states);
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  g.moves1.resize(n);
  g.moves2.resize(n);
  g.delta.resize(n);
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  for (int s = 0; s < n; ++s) {
    const bool sink = s == 0 || s == n - 1;
    int m1 = sink ? 1 : rand_int(rng, 2, max_moves);
    int m2 = sink ? 1 : rand_int(rng, 1, std::min(2, max_moves));
    for (int i = 0; i < m1; ++i) g.moves1[s].push_back(names[i]);
    for (int i = 0; i < m2; ++i) g.moves2[s].push_back(names[i]);
    g.delta[s].assign(m1, std::vector<Distribution<V>>(m2));
    for (int a = 0; a < m1; ++a)
      for (int b = 0; b < m2; ++b)
        g.delta[s][a][b] = sink ? Distribution<V>::point(s)
                                : random_dyadic_dist<V>(rng, random_subset(rng, n, 2));
  }
  return g;
}

/// The safe set paired with random_safety_game: everything but the bad sink.
inline IndexSet safety_game_safe_set(int num_states) {
  IndexSet F;
  for (int s = 0; s + 1 < num_states; ++s) F.push_back(s);
  return F;
}

/// Turn-based game with a safe and a bad sink and mixed interior owners;
/// random interior states get dyadic distributions.
template <class V>
TurnBasedGame<V> random_turn_based_structured(std::mt19937& rng, int max_states = 5) {
  TurnBasedGame<V> g;
  const int n = rand_int(rng, 4, max_states);
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  g.edges.resize(n);
  g.dist.resize(n);
  for (int s = 0; s < n; ++s) {
    if (s == 0 || s == n - 1) {
      g.owner.push_back(Owner::player1);
      g.edges[s] = {s};
      continue;
    }
    switch (rand_int(rng, 0, 2)) {
      case 0: g.owner.push_back(Owner::player1); break;
      case 1: g.owner.push_back(Owner::player2); break;
      default: g.owner.push_back(Owner::random); break;
    }
    g.edges[s] = random_subset(rng, n, 3);
    if (g.owner[s] == Owner::random) g.dist[s] = random_dyadic_dist<V>(rng, g.edges[s]);
  }
  return g;
}

/// Binary turn-based game built around a ring of random states with
/// half/half exits to a goal and a dead sink; denominators of the exact
/// values genuinely grow with the ring length.
template <class V>
TurnBasedGame<V> random_binary_ring(std::mt19937& rng, int max_sr = 4) {
  TurnBasedGame<V> g;
  const int sr = rand_int(rng, 2, max_sr);
  const int nc = rand_int(rng, 0, 1);
  const int n = 2 + sr + nc;  // 0 = goal sink, 1 = dead sink
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));
  g.edges.resize(n);
  g.dist.resize(n);
  g.owner.assign(n, Owner::player1);
  g.edges[0] = {0};
  g.edges[1] = {1};
  for (int k = 0; k < sr; ++k) {
    int s = 2 + k;
    g.owner[s] = Owner::random;
    IndexSet e = set_sorted({2 + (k + 1) % sr, rand_int(rng, 0, 1)});
    g.edges[s] = e;
    if (e.size() == 1)
      g.dist[s] = Distribution<V>::point(e[0]);
    else
      g.dist[s] = Distribution<V>({{e[0], V(1) / V(2)}, {e[1], V(1) / V(2)}});
  }
  for (int s = 2 + sr; s < n; ++s) {
    g.owner[s] = rand_int(rng, 0, 1) ? Owner::player1 : Owner::player2;
    g.edges[s] = random_subset(rng, n, 2);
  }
  return g;
}

template <class V>
Valuation<V> random_valuation(std::mt19937& rng, int n) {
  Valuation<V> v(n);
  for (int s = 0; s < n; ++s) v[s] = V(rand_int(rng, 0, 8)) / V(8);
  return v;
}

template <class V>
Selector<V> random_selector(std::mt19937& rng, const ConcurrentGame<V>& g, int player) {
  Selector<V> sel;
  sel.player = player;
  sel.choice.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    const int m = static_cast<int>(g.moves(player, s).size());
    IndexSet all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    IndexSet supp = random_subset(rng, m, m);
    (void)all;
    sel.choice[s] = random_dyadic_dist<V>(rng, supp);
  }
  return sel;
}

// ---------------------------------------------------------------------------
// Oracles

/// Grid search over the row simplex of a 2-row matrix game (step 1e-4).
inline double grid_matrix_value(const std::vector<std::vector<double>>& M, double step = 1e-4) {
  const int m2 = static_cast<int>(M[0].size());
  double best = -1;
  for (double p = 0.0; p <= 1.0 + 1e-12; p += step) {
    double worst = 1e9;
    for (int b = 0; b < m2; ++b)
      worst = std::min(worst, p * M[0][b] + (1 - p) * M[1][b]);
    best = std::max(best, worst);
  }
  return best;
}

/// All pure selectors of one player (move-index vectors expanded in order).
template <class V>
std::vector<Selector<V>> all_pure_selectors(const ConcurrentGame<V>& g, int player) {
  std::vector<Selector<V>> out;
  std::vector<int> pick(g.num_states(), 0);
  while (true) {
    Selector<V> sel;
    sel.player = player;
    for (int s = 0; s < g.num_states(); ++s)
      sel.choice.push_back(Distribution<V>::point(pick[s]));
    out.push_back(std::move(sel));
    int s = 0;
    for (; s < g.num_states(); ++s) {
      if (pick[s] + 1 < static_cast<int>(g.moves(player, s).size())) {
        ++pick[s];
        break;
      }
      pick[s] = 0;
    }
    if (s == g.num_states()) break;
  }
  return out;
}

template <class V>
MarkovChain<V> absorb_chain(MarkovChain<V> chain, const IndexSet& absorbing) {
  for (int t : absorbing) chain.rows[t] = Distribution<V>::point(t);
  return chain;
}

/// Brute-force minimax over all pure memoryless strategy pairs. Sound for
/// turn-based games, where pure memoryless optimal strategies exist for
/// both players.
template <class V>
Valuation<V> brute_force_value(const ConcurrentGame<V>& g, const Objective& obj) {
  const int n = g.num_states();
  IndexSet T = obj.kind == Objective::Kind::reach ? obj.set : set_complement(obj.set, n);
  auto sel1 = all_pure_selectors(g, 1);
  auto sel2 = all_pure_selectors(g, 2);
  Valuation<V> best(n, V(0));
  bool first1 = true;
  for (const auto& x1 : sel1) {
    Valuation<V> worst(n, V(1));
    bool first2 = true;
    for (const auto& x2 : sel2) {
      MarkovChain<V> chain = absorb_chain(fix_both(g, x1, x2), T);
      Valuation<V> r = chain_reach(chain, T);
      for (int s = 0; s < n; ++s) {
        V val = obj.kind == Objective::Kind::reach ? r[s] : V(1) - r[s];
        if (first2 || val < worst[s]) worst[s] = val;
      }
      first2 = false;
    }
    for (int s = 0; s < n; ++s)
      if (first1 || worst[s] > best[s]) best[s] = worst[s];
    first1 = false;
  }
  return best;
}

template <class V>
Valuation<V> brute_force_value(const TurnBasedGame<V>& g, const Objective& obj) {
  return brute_force_value(to_concurrent(g), obj);
}

/// Checks the end-component definition directly: closedness of every chosen
/// action and strong connectivity of the induced graph.
template <class V>
bool is_end_component(const Mdp<V>& mdp, const IndexSet& states,
                      const std::vector<IndexSet>& actions) {
  if (states.empty()) return false;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (actions[i].empty()) return false;
    for (int m : actions[i])
      for (const auto& [t, p] : mdp.trans(states[i], m).entries)
        if (!set_contains(states, t)) return false;  // not closed
  }
  // strong connectivity via repeated reachability
  for (std::size_t i = 0; i < states.size(); ++i) {
    std::vector<bool> seen(mdp.num_states(), false);
    std::vector<int> stack = {states[i]};
    seen[states[i]] = true;
    while (!stack.empty()) {
      int s = stack.back();
      stack.pop_back();
      auto pos = std::lower_bound(states.begin(), states.end(), s) - states.begin();
      for (int m : actions[pos])
        for (const auto& [t, p] : mdp.trans(s, m).entries)
          if (!seen[t]) {
            seen[t] = true;
            stack.push_back(t);
          }
    }
    for (int t : states)
      if (!seen[t]) return false;
  }
  return true;
}

/// Largest candidate action sets for a state set: all moves staying inside.
template <class V>
std::vector<IndexSet> max_actions_within(const Mdp<V>& mdp, const IndexSet& states) {
  std::vector<IndexSet> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    for (int m = 0; m < mdp.num_moves(states[i]); ++m) {
      bool inside = true;
      for (const auto& [t, p] : mdp.trans(states[i], m).entries)
        if (!set_contains(states, t)) inside = false;
      if (inside) out[i].push_back(m);
    }
  return out;
}

/// Properness by definition: every pure opponent selector reaches the goal
/// with probability 1 from every state.
template <class V>
bool brute_force_proper(const ConcurrentGame<V>& g, const Selector<V>& s1, const IndexSet& goal) {
  for (const auto& s2 : all_pure_selectors(g, 2)) {
    MarkovChain<V> chain = fix_both(g, s1, s2);
    Valuation<V> r = chain_reach(chain, goal);
    for (int s = 0; s < g.num_states(); ++s)
      if (!(r[s] == V(1))) return false;
  }
  return true;
}

}  // namespace fixtures
