#pragma once

// Probability-one analyses: attractors and almost-sure safety for
// turn-based games, and the almost-sure (value-1) and value-0 sets for
// concurrent games. All discrete graph fixpoints, no numerics.

#include "csg/game.hpp"

#include <map>
#include <vector>

namespace csg {

/// Winning set plus a witness: a pure choice map for turn-based games, or
/// a per-state move-support map for concurrent games.
struct QualitativeResult {
  IndexSet winning;
  std::map<int, int> tb_choice;            // turn-based: state -> chosen successor
  std::map<int, IndexSet> support;         // concurrent: state -> move support
};

/// Least set from which `player` forces reaching `target` with positive
/// probability, with the pure attractor selector (owner states point one
/// layer down).
template <class V>
QualitativeResult attractor_tb(const TurnBasedGame<V>& g, int player, const IndexSet& target) {
  const int n = g.num_states();
  Owner own = player == 1 ? Owner::player1 : Owner::player2;
  std::vector<bool> in(n, false);
  for (int t : target) in[t] = true;
  QualitativeResult out;
  for (bool grew = true; grew;) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      if (in[s]) continue;
      bool add = false;
      if (g.owner[s] == own || g.owner[s] == Owner::random) {
        for (int t : g.edges[s])
          if (in[t]) {
            add = true;
            if (g.owner[s] == own) out.tb_choice[s] = t;
            break;
          }
      } else {
        add = true;
        for (int t : g.edges[s])
          if (!in[t]) {
            add = false;
            break;
          }
      }
      if (add) {
        in[s] = true;
        grew = true;
      }
    }
  }
  for (int s = 0; s < n; ++s)
    if (in[s]) out.winning.push_back(s);
  return out;
}

/// Almost-sure winning states for Safe(safe) in a turn-based game: the
/// greatest set where the player can stay, the opponent cannot leave, and
/// no random edge leaves. For safety, almost-sure and sure coincide.
template <class V>
QualitativeResult almost_sure_safe_tb(const TurnBasedGame<V>& g, int player,
                                      const IndexSet& safe) {
  const int n = g.num_states();
  Owner own = player == 1 ? Owner::player1 : Owner::player2;
  std::vector<bool> in(n, false);
  for (int s : safe) in[s] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!in[s]) continue;
      bool keep;
      if (g.owner[s] == own) {
        keep = false;
        for (int t : g.edges[s])
          if (in[t]) {
            keep = true;
            break;
          }
      } else {
        keep = true;
        for (int t : g.edges[s])
          if (!in[t]) {
            keep = false;
            break;
          }
      }
      if (!keep) {
        in[s] = false;
        changed = true;
      }
    }
  }
  QualitativeResult out;
  for (int s = 0; s < n; ++s) {
    if (!in[s]) continue;
    out.winning.push_back(s);
    if (g.owner[s] == own)
      for (int t : g.edges[s])
        if (in[t]) {
          out.tb_choice[s] = t;
          break;
        }
  }
  return out;
}

/// Almost-sure winning states for Safe(F) in a concurrent game: greatest
/// fixpoint of the support predecessor. The witness records, per winning
/// state, the maximal move support whose destinations stay inside against
/// every opponent move.
template <class V>
QualitativeResult almost_sure_safe_concurrent(const ConcurrentGame<V>& g, int player,
                                              const IndexSet& F) {
  const int n = g.num_states();
  std::vector<bool> in(n, false);
  for (int s : F) in[s] = true;

  auto safe_support = [&](int s) {
    IndexSet A;
    const int mo = static_cast<int>(g.moves(player, s).size());
    const int mopp = static_cast<int>(g.moves(3 - player, s).size());
    for (int a = 0; a < mo; ++a) {
      bool ok = true;
      for (int b = 0; b < mopp && ok; ++b) {
        const Distribution<V>& d = player == 1 ? g.delta[s][a][b] : g.delta[s][b][a];
        for (const auto& [t, p] : d.entries)
          if (!in[t]) {
            ok = false;
            break;
          }
      }
      if (ok) A.push_back(a);
    }
    return A;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!in[s]) continue;
      if (safe_support(s).empty()) {
        in[s] = false;
        changed = true;
      }
    }
  }
  QualitativeResult out;
  for (int s = 0; s < n; ++s) {
    if (!in[s]) continue;
    out.winning.push_back(s);
    out.support[s] = safe_support(s);
  }
  return out;
}

/// W2 for Reach(T): the states where player 1's reachability value is zero,
/// i.e. where player 2 wins Safe(S \ T) almost surely.
template <class V>
QualitativeResult reach_value_zero_set(const ConcurrentGame<V>& g, const IndexSet& T) {
  return almost_sure_safe_concurrent(g, 2, set_complement(T, g.num_states()));
}

}  // namespace csg
