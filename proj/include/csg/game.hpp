#pragma once

// Game graphs: concurrent and turn-based stochastic games, distributions,
// valuations, selectors, and the fixing constructions that turn games into
// MDPs and Markov chains. All types are immutable value types once built.

#include "csg/numeric.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace csg {

/// Sorted set of dense state (or move) indices.
using IndexSet = std::vector<int>;

inline bool set_contains(const IndexSet& s, int x) {
  return std::binary_search(s.begin(), s.end(), x);
}

inline IndexSet set_sorted(IndexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  IndexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline IndexSet set_complement(const IndexSet& a, int n) {
  IndexSet out;
  for (int i = 0; i < n; ++i)
    if (!set_contains(a, i)) out.push_back(i);
  return out;
}

/// Sparse probability distribution over dense indices (states or moves).
template <class V>
struct Distribution {
  std::vector<std::pair<int, V>> entries;  // sorted by index, weights > 0

  Distribution() = default;
  explicit Distribution(std::vector<std::pair<int, V>> raw) { assign(std::move(raw)); }

  static Distribution point(int i) { return Distribution({{i, V(1)}}); }

  static Distribution uniform(const IndexSet& ids) {
    Distribution d;
    V w = V(1) / V(static_cast<int>(ids.size()));
    for (int i : ids) d.entries.emplace_back(i, w);
    return d;
  }

  void assign(std::vector<std::pair<int, V>> raw) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    entries.clear();
    for (auto& [i, w] : raw) {
      if (w == V(0)) continue;
      if (!entries.empty() && entries.back().first == i)
        entries.back().second += w;
      else
        entries.emplace_back(i, w);
    }
  }

  V prob(int i) const {
    for (const auto& [j, w] : entries)
      if (j == i) return w;
    return V(0);
  }

  V sum() const {
    V s(0);
    for (const auto& [i, w] : entries) s += w;
    return s;
  }

  IndexSet support() const {
    IndexSet s;
    for (const auto& [i, w] : entries) s.push_back(i);
    return s;
  }

  bool is_point() const { return entries.size() == 1 && entries[0].second == V(1); }

  bool operator==(const Distribution&) const = default;
};

/// Valuation: one probability in [0,1] per state, indexed densely.
template <class V>
using Valuation = std::vector<V>;

template <class V>
Valuation<V> indicator_valuation(int n, const IndexSet& set) {
  Valuation<V> v(n, V(0));
  for (int s : set) v[s] = V(1);
  return v;
}

/// Two-player concurrent game: at every state both players pick a move
/// simultaneously; the pair fixes a distribution over successors.
template <class V>
struct ConcurrentGame {
  std::vector<std::string> states;                 // index -> name
  std::vector<std::vector<std::string>> moves1;    // per state, player-1 moves
  std::vector<std::vector<std::string>> moves2;    // per state, player-2 moves
  // delta[s][a][b]: a indexes moves1[s], b indexes moves2[s]
  std::vector<std::vector<std::vector<Distribution<V>>>> delta;

  int num_states() const { return static_cast<int>(states.size()); }

  int state_index(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
      if (states[i] == name) return i;
    throw std::invalid_argument("unknown state '" + name + "'");
  }

  const std::vector<std::string>& moves(int player, int s) const {
    return player == 1 ? moves1[s] : moves2[s];
  }

  /// Global move alphabet (union over states and players).
  std::vector<std::string> alphabet() const {
    std::vector<std::string> out;
    for (int s = 0; s < num_states(); ++s) {
      out.insert(out.end(), moves1[s].begin(), moves1[s].end());
      out.insert(out.end(), moves2[s].begin(), moves2[s].end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool is_absorbing(int s) const {
    for (const auto& row : delta[s])
      for (const auto& d : row)
        if (!(d.entries.size() == 1 && d.entries[0].first == s)) return false;
    return true;
  }

  bool operator==(const ConcurrentGame&) const = default;
};

enum class Owner { player1, player2, random };

/// Turn-based stochastic game: each state is controlled by one player or
/// by chance.
template <class V>
struct TurnBasedGame {
  std::vector<std::string> states;
  std::vector<Owner> owner;
  std::vector<IndexSet> edges;             // per state, sorted successors
  std::vector<Distribution<V>> dist;       // nonempty exactly at random states

  int num_states() const { return static_cast<int>(states.size()); }

  int state_index(const std::string& name) const {
    for (int i = 0; i < num_states(); ++i)
      if (states[i] == name) return i;
    throw std::invalid_argument("unknown state '" + name + "'");
  }

  IndexSet states_of(Owner o) const {
    IndexSet out;
    for (int s = 0; s < num_states(); ++s)
      if (owner[s] == o) out.push_back(s);
    return out;
  }

  bool operator==(const TurnBasedGame&) const = default;
};

/// Memoryless randomized strategy: one distribution over the owner's
/// available moves per state.
template <class V>
struct Selector {
  int player = 1;
  std::vector<Distribution<V>> choice;  // per state, over move indices

  bool is_pure() const {
    for (const auto& d : choice)
      if (!d.is_point()) return false;
    return true;
  }

  bool operator==(const Selector&) const = default;
};

/// Concurrent game in which the other player has a single move everywhere.
template <class V>
struct Mdp {
  ConcurrentGame<V> game;
  int decision_player = 2;

  int num_states() const { return game.num_states(); }
  const std::vector<std::string>& moves(int s) const { return game.moves(decision_player, s); }
  int num_moves(int s) const { return static_cast<int>(moves(s).size()); }

  /// Transition distribution under the decision player's move m.
  const Distribution<V>& trans(int s, int m) const {
    return decision_player == 2 ? game.delta[s][0][m] : game.delta[s][m][0];
  }
};

template <class V>
struct MarkovChain {
  std::vector<Distribution<V>> rows;
  int num_states() const { return static_cast<int>(rows.size()); }
};

struct Objective {
  enum class Kind { safe, reach };
  Kind kind = Kind::safe;
  IndexSet set;  // F for safe, T for reach
};

struct Diagnostic {
  std::string state;
  std::string field;
  std::string reason;
};

// ---------------------------------------------------------------------------
// Validation

template <class V>
std::vector<Diagnostic> validate_game(const ConcurrentGame<V>& g, const V& sum_tol = V(0)) {
  std::vector<Diagnostic> out;
  const int n = g.num_states();
  if (static_cast<int>(g.moves1.size()) != n || static_cast<int>(g.moves2.size()) != n ||
      static_cast<int>(g.delta.size()) != n) {
    out.push_back({"", "states", "field sizes disagree with state count"});
    return out;
  }
  for (int s = 0; s < n; ++s) {
    if (g.moves1[s].empty()) out.push_back({g.states[s], "moves1", "empty move set"});
    if (g.moves2[s].empty()) out.push_back({g.states[s], "moves2", "empty move set"});
    if (g.delta[s].size() != g.moves1[s].size()) {
      out.push_back({g.states[s], "delta", "row count differs from |moves1|"});
      continue;
    }
    for (std::size_t a = 0; a < g.delta[s].size(); ++a) {
      if (g.delta[s][a].size() != g.moves2[s].size()) {
        out.push_back({g.states[s], "delta", "column count differs from |moves2|"});
        continue;
      }
      for (std::size_t b = 0; b < g.delta[s][a].size(); ++b) {
        const auto& d = g.delta[s][a][b];
        if (d.entries.empty()) {
          out.push_back({g.states[s], "delta", "empty distribution for (" + g.moves1[s][a] +
                                                   "," + g.moves2[s][b] + ")"});
          continue;
        }
        for (const auto& [t, w] : d.entries) {
          if (t < 0 || t >= n)
            out.push_back({g.states[s], "delta", "target index out of range"});
          if (w < V(0))
            out.push_back({g.states[s], "delta", "negative probability"});
        }
        V sum = d.sum();
        V diff = sum > V(1) ? sum - V(1) : V(1) - sum;
        if (diff > sum_tol)
          out.push_back({g.states[s], "delta",
                         "distribution sum for (" + g.moves1[s][a] + "," + g.moves2[s][b] +
                             ") is " + format_number(sum) + ", expected 1"});
      }
    }
  }
  return out;
}

template <class V>
std::vector<Diagnostic> validate_game(const TurnBasedGame<V>& g, const V& sum_tol = V(0)) {
  std::vector<Diagnostic> out;
  const int n = g.num_states();
  for (int s = 0; s < n; ++s) {
    if (g.edges[s].empty()) out.push_back({g.states[s], "edges", "no outgoing edge"});
    for (int t : g.edges[s])
      if (t < 0 || t >= n) out.push_back({g.states[s], "edges", "successor out of range"});
    if (g.owner[s] == Owner::random) {
      const auto& d = g.dist[s];
      if (d.support() != g.edges[s]) {
        out.push_back({g.states[s], "dist", "support differs from edge set"});
        continue;
      }
      for (const auto& [t, w] : d.entries)
        if (w < V(0)) out.push_back({g.states[s], "dist", "negative probability"});
      V sum = d.sum();
      V diff = sum > V(1) ? sum - V(1) : V(1) - sum;
      if (diff > sum_tol)
        out.push_back({g.states[s], "dist",
                       "distribution sum is " + format_number(sum) + ", expected 1"});
    } else if (!g.dist[s].entries.empty()) {
      out.push_back({g.states[s], "dist", "distribution given for a non-random state"});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Selector helpers

template <class V>
void check_selector(const ConcurrentGame<V>& g, const Selector<V>& sel) {
  if (sel.player != 1 && sel.player != 2)
    throw std::invalid_argument("selector player must be 1 or 2");
  if (static_cast<int>(sel.choice.size()) != g.num_states())
    throw std::invalid_argument("selector state count differs from game");
  for (int s = 0; s < g.num_states(); ++s) {
    const int m = static_cast<int>(g.moves(sel.player, s).size());
    for (const auto& [a, w] : sel.choice[s].entries) {
      if (a < 0 || a >= m)
        throw std::invalid_argument("invalid selector: support outside available moves at state '" +
                                    g.states[s] + "'");
      if (w < V(0)) throw std::invalid_argument("invalid selector: negative weight");
    }
    if (sel.choice[s].entries.empty())
      throw std::invalid_argument("invalid selector: empty distribution at state '" +
                                  g.states[s] + "'");
  }
}

template <class V>
Selector<V> uniform_selector(const ConcurrentGame<V>& g, int player) {
  Selector<V> sel;
  sel.player = player;
  sel.choice.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    const int m = static_cast<int>(g.moves(player, s).size());
    IndexSet all(m);
    for (int i = 0; i < m; ++i) all[i] = i;
    sel.choice[s] = Distribution<V>::uniform(all);
  }
  return sel;
}

// ---------------------------------------------------------------------------
// Constructions

/// Makes every state in A absorbing: singleton move sets and a probability-1
/// self-loop. States outside A are untouched.
template <class V>
ConcurrentGame<V> make_absorbing(const ConcurrentGame<V>& g, const IndexSet& A) {
  for (int s : A)
    if (s < 0 || s >= g.num_states())
      throw std::invalid_argument("make_absorbing: unknown state index " + std::to_string(s));
  ConcurrentGame<V> out = g;
  for (int s : A) {
    out.moves1[s] = {g.moves1[s].front()};
    out.moves2[s] = {g.moves2[s].front()};
    out.delta[s] = {{Distribution<V>::point(s)}};
  }
  return out;
}

/// Fixes one player's selector, leaving an MDP for the other player:
/// delta'(s, b)(t) = sum_a delta(s, a, b)(t) * xi(s)(a).
template <class V>
Mdp<V> fix_selector(const ConcurrentGame<V>& g, const Selector<V>& sel) {
  check_selector(g, sel);
  Mdp<V> mdp;
  mdp.decision_player = 3 - sel.player;
  ConcurrentGame<V>& out = mdp.game;
  out.states = g.states;
  out.moves1.resize(g.num_states());
  out.moves2.resize(g.num_states());
  out.delta.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    const auto& own = sel.player == 1 ? g.moves1[s] : g.moves2[s];
    const auto& rest = sel.player == 1 ? g.moves2[s] : g.moves1[s];
    const int nrest = static_cast<int>(rest.size());
    std::vector<Distribution<V>> mixed(nrest);
    for (int r = 0; r < nrest; ++r) {
      std::vector<std::pair<int, V>> acc;
      for (const auto& [a, w] : sel.choice[s].entries) {
        const Distribution<V>& d = sel.player == 1 ? g.delta[s][a][r] : g.delta[s][r][a];
        for (const auto& [t, p] : d.entries) acc.emplace_back(t, w * p);
      }
      mixed[r] = Distribution<V>(std::move(acc));
    }
    (void)own;
    if (sel.player == 1) {
      out.moves1[s] = {"*"};
      out.moves2[s] = rest;
      out.delta[s].resize(1);
      out.delta[s][0] = std::move(mixed);
    } else {
      out.moves1[s] = rest;
      out.moves2[s] = {"*"};
      out.delta[s].resize(nrest);
      for (int r = 0; r < nrest; ++r) out.delta[s][r] = {std::move(mixed[r])};
    }
  }
  return mdp;
}

/// Fixes both selectors, leaving a Markov chain.
template <class V>
MarkovChain<V> fix_both(const ConcurrentGame<V>& g, const Selector<V>& s1, const Selector<V>& s2) {
  check_selector(g, s1);
  check_selector(g, s2);
  if (s1.player != 1 || s2.player != 2)
    throw std::invalid_argument("fix_both expects a player-1 and a player-2 selector");
  MarkovChain<V> chain;
  chain.rows.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    std::vector<std::pair<int, V>> acc;
    for (const auto& [a, wa] : s1.choice[s].entries)
      for (const auto& [b, wb] : s2.choice[s].entries)
        for (const auto& [t, p] : g.delta[s][a][b].entries) acc.emplace_back(t, wa * wb * p);
    chain.rows[s] = Distribution<V>(std::move(acc));
  }
  return chain;
}

/// Destinations over explicit action sets: union of supports of
/// delta(s, a, b) over a in A, b in B.
template <class V>
IndexSet destinations(const ConcurrentGame<V>& g, int s, const IndexSet& A, const IndexSet& B) {
  IndexSet out;
  for (int a : A)
    for (int b : B)
      for (const auto& [t, w] : g.delta[s][a][b].entries) out.push_back(t);
  return set_sorted(std::move(out));
}

/// Destinations under two selectors: union over the supports of the chosen
/// move distributions.
template <class V>
IndexSet destinations(const ConcurrentGame<V>& g, int s, const Selector<V>& s1,
                      const Selector<V>& s2) {
  check_selector(g, s1);
  check_selector(g, s2);
  return destinations(g, s, s1.choice[s].support(), s2.choice[s].support());
}

/// Value class U_r(v): the states whose valuation equals r (up to the
/// comparison tolerance).
template <class V>
IndexSet value_class(const Valuation<V>& v, const V& r, const Cmp<V>& cmp = {}) {
  IndexSet out;
  for (int s = 0; s < static_cast<int>(v.size()); ++s)
    if (cmp.eq(v[s], r)) out.push_back(s);
  return out;
}

// ---------------------------------------------------------------------------
// Turn-based <-> concurrent conversion and player swap

/// Encodes a turn-based game as a concurrent one: the owner keeps its moves
/// (named after the successor states), the other player gets a dummy move,
/// and random states carry their distribution under a dummy/dummy pair.
template <class V>
ConcurrentGame<V> to_concurrent(const TurnBasedGame<V>& tb) {
  ConcurrentGame<V> g;
  g.states = tb.states;
  const int n = tb.num_states();
  g.moves1.resize(n);
  g.moves2.resize(n);
  g.delta.resize(n);
  for (int s = 0; s < n; ++s) {
    std::vector<std::string> succ_names;
    for (int t : tb.edges[s]) succ_names.push_back(tb.states[t]);
    switch (tb.owner[s]) {
      case Owner::player1: {
        g.moves1[s] = succ_names;
        g.moves2[s] = {"-"};
        g.delta[s].resize(succ_names.size());
        for (std::size_t i = 0; i < succ_names.size(); ++i)
          g.delta[s][i] = {Distribution<V>::point(tb.edges[s][i])};
        break;
      }
      case Owner::player2: {
        g.moves1[s] = {"-"};
        g.moves2[s] = succ_names;
        g.delta[s].resize(1);
        for (std::size_t i = 0; i < succ_names.size(); ++i)
          g.delta[s][0].push_back(Distribution<V>::point(tb.edges[s][i]));
        break;
      }
      case Owner::random: {
        g.moves1[s] = {"-"};
        g.moves2[s] = {"-"};
        g.delta[s] = {{tb.dist[s]}};
        break;
      }
    }
  }
  return g;
}

/// Swaps the two players' roles (transposes every one-shot game).
template <class V>
ConcurrentGame<V> swap_players(const ConcurrentGame<V>& g) {
  ConcurrentGame<V> out;
  out.states = g.states;
  out.moves1 = g.moves2;
  out.moves2 = g.moves1;
  out.delta.resize(g.num_states());
  for (int s = 0; s < g.num_states(); ++s) {
    const int m1 = static_cast<int>(g.moves1[s].size());
    const int m2 = static_cast<int>(g.moves2[s].size());
    out.delta[s].assign(m2, std::vector<Distribution<V>>(m1));
    for (int a = 0; a < m1; ++a)
      for (int b = 0; b < m2; ++b) out.delta[s][b][a] = g.delta[s][a][b];
  }
  return out;
}

template <class V>
TurnBasedGame<V> swap_players(const TurnBasedGame<V>& tb) {
  TurnBasedGame<V> out = tb;
  for (auto& o : out.owner) {
    if (o == Owner::player1)
      o = Owner::player2;
    else if (o == Owner::player2)
      o = Owner::player1;
  }
  return out;
}

}  // namespace csg
