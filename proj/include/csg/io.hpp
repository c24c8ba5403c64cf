#pragma once

// JSON game files, result and trace emission. The game schema is strict:
// every (state, move, move) transition must be present exactly once, and
// probabilities come as "p/q" or decimal strings.

#include "csg/game.hpp"
#include "csg/improvement.hpp"

#include <json.hpp>

#include <set>
#include <string>
#include <variant>

namespace csg {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class V>
using GameVariant = std::variant<ConcurrentGame<V>, TurnBasedGame<V>>;

namespace detail {

template <class V>
V parse_probability(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string())
    throw ParseError(where + ": probabilities must be strings (\"p/q\" or decimal)");
  V p;
  try {
    p = parse_number<V>(j.get<std::string>());
  } catch (const std::exception& e) {
    throw ParseError(where + ": " + e.what());
  }
  if (p < V(0) || p > V(1))
    throw ParseError(where + ": probability " + j.get<std::string>() + " outside [0,1]");
  return p;
}

inline void require_fields(const nlohmann::json& j, std::initializer_list<const char*> fields,
                           const std::string& what) {
  for (const char* f : fields)
    if (!j.contains(f)) throw ParseError(what + ": missing field '" + std::string(f) + "'");
}

template <class V>
ConcurrentGame<V> parse_concurrent(const nlohmann::json& j) {
  require_fields(j, {"states", "moves1", "moves2", "transitions"}, "concurrent game");
  ConcurrentGame<V> g;
  for (const auto& s : j.at("states")) g.states.push_back(s.get<std::string>());
  if (g.states.empty()) throw ParseError("game has no states");
  {
    std::set<std::string> uniq(g.states.begin(), g.states.end());
    if (uniq.size() != g.states.size()) throw ParseError("duplicate state names");
  }
  const int n = g.num_states();
  g.moves1.resize(n);
  g.moves2.resize(n);
  g.delta.resize(n);
  auto read_moves = [&](const char* key, std::vector<std::vector<std::string>>& out) {
    const auto& m = j.at(key);
    for (int s = 0; s < n; ++s) {
      if (!m.contains(g.states[s]))
        throw ParseError(std::string(key) + ": no entry for state '" + g.states[s] + "'");
      for (const auto& mv : m.at(g.states[s])) out[s].push_back(mv.template get<std::string>());
      if (out[s].empty())
        throw ParseError(std::string(key) + ": empty move set at '" + g.states[s] + "'");
      std::set<std::string> uniq(out[s].begin(), out[s].end());
      if (uniq.size() != out[s].size())
        throw ParseError(std::string(key) + ": duplicate moves at '" + g.states[s] + "'");
    }
  };
  read_moves("moves1", g.moves1);
  read_moves("moves2", g.moves2);
  for (int s = 0; s < n; ++s)
    g.delta[s].assign(g.moves1[s].size(), std::vector<Distribution<V>>(g.moves2[s].size()));

  auto move_index = [](const std::vector<std::string>& moves, const std::string& name) {
    for (int i = 0; i < static_cast<int>(moves.size()); ++i)
      if (moves[i] == name) return i;
    return -1;
  };
  std::vector<std::vector<std::vector<bool>>> seen(n);
  for (int s = 0; s < n; ++s)
    seen[s].assign(g.moves1[s].size(), std::vector<bool>(g.moves2[s].size(), false));

  for (const auto& tr : j.at("transitions")) {
    require_fields(tr, {"from", "a1", "a2", "dist"}, "transition");
    int s = -1;
    try {
      s = g.state_index(tr.at("from").get<std::string>());
    } catch (const std::exception& e) {
      throw ParseError(std::string("transition: ") + e.what());
    }
    int a = move_index(g.moves1[s], tr.at("a1").get<std::string>());
    int b = move_index(g.moves2[s], tr.at("a2").get<std::string>());
    const std::string where = "transition from '" + g.states[s] + "'";
    if (a < 0 || b < 0) throw ParseError(where + ": move not available at the state");
    if (seen[s][a][b]) throw ParseError(where + ": duplicate (a1,a2) entry");
    seen[s][a][b] = true;
    std::vector<std::pair<int, V>> entries;
    for (const auto& [target, prob] : tr.at("dist").items()) {
      int t;
      try {
        t = g.state_index(target);
      } catch (const std::exception& e) {
        throw ParseError(where + ": " + e.what());
      }
      entries.emplace_back(t, parse_probability<V>(prob, where));
    }
    g.delta[s][a][b] = Distribution<V>(std::move(entries));
  }
  for (int s = 0; s < n; ++s)
    for (std::size_t a = 0; a < g.moves1[s].size(); ++a)
      for (std::size_t b = 0; b < g.moves2[s].size(); ++b)
        if (!seen[s][a][b])
          throw ParseError("missing transition for ('" + g.states[s] + "','" + g.moves1[s][a] +
                           "','" + g.moves2[s][b] + "')");
  return g;
}

template <class V>
TurnBasedGame<V> parse_turn_based(const nlohmann::json& j) {
  require_fields(j, {"states", "owner", "edges"}, "turn-based game");
  TurnBasedGame<V> g;
  for (const auto& s : j.at("states")) g.states.push_back(s.get<std::string>());
  if (g.states.empty()) throw ParseError("game has no states");
  {
    std::set<std::string> uniq(g.states.begin(), g.states.end());
    if (uniq.size() != g.states.size()) throw ParseError("duplicate state names");
  }
  const int n = g.num_states();
  g.owner.resize(n);
  g.edges.resize(n);
  g.dist.resize(n);
  for (int s = 0; s < n; ++s) {
    if (!j.at("owner").contains(g.states[s]))
      throw ParseError("owner: no entry for state '" + g.states[s] + "'");
    std::string o = j.at("owner").at(g.states[s]).template get<std::string>();
    if (o == "p1")
      g.owner[s] = Owner::player1;
    else if (o == "p2")
      g.owner[s] = Owner::player2;
    else if (o == "random")
      g.owner[s] = Owner::random;
    else
      throw ParseError("owner: '" + o + "' is not one of p1|p2|random");
    if (!j.at("edges").contains(g.states[s]))
      throw ParseError("edges: no entry for state '" + g.states[s] + "'");
    IndexSet e;
    for (const auto& t : j.at("edges").at(g.states[s])) {
      try {
        e.push_back(g.state_index(t.template get<std::string>()));
      } catch (const std::exception& ex) {
        throw ParseError(std::string("edges: ") + ex.what());
      }
    }
    g.edges[s] = set_sorted(std::move(e));
    if (g.edges[s].empty()) throw ParseError("edges: state '" + g.states[s] + "' has no successor");
  }
  for (int s = 0; s < n; ++s) {
    if (g.owner[s] != Owner::random) continue;
    if (!j.contains("dist") || !j.at("dist").contains(g.states[s]))
      throw ParseError("dist: missing distribution for random state '" + g.states[s] + "'");
    std::vector<std::pair<int, V>> entries;
    for (const auto& [target, prob] : j.at("dist").at(g.states[s]).items()) {
      int t;
      try {
        t = g.state_index(target);
      } catch (const std::exception& ex) {
        throw ParseError(std::string("dist: ") + ex.what());
      }
      entries.emplace_back(t, parse_probability<V>(prob, "dist of '" + g.states[s] + "'"));
    }
    g.dist[s] = Distribution<V>(std::move(entries));
  }
  return g;
}

}  // namespace detail

/// Parses a game file; runs the full validity check and reports every
/// diagnostic as an error.
template <class V>
GameVariant<V> parse_game(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("game file: missing 'kind'");
  std::string kind = j.at("kind").get<std::string>();
  V sum_tol = is_rational_backend<V> ? V(0) : V(1e-12);
  std::vector<Diagnostic> diags;
  GameVariant<V> out;
  if (kind == "concurrent") {
    ConcurrentGame<V> g = detail::parse_concurrent<V>(j);
    diags = validate_game(g, sum_tol);
    out = std::move(g);
  } else if (kind == "turn-based") {
    TurnBasedGame<V> g = detail::parse_turn_based<V>(j);
    diags = validate_game(g, sum_tol);
    out = std::move(g);
  } else {
    throw ParseError("game file: kind '" + kind + "' is not concurrent|turn-based");
  }
  if (!diags.empty()) {
    std::string msg = "invalid game:";
    for (const auto& d : diags) msg += "\n  [" + d.state + "." + d.field + "] " + d.reason;
    throw ParseError(msg);
  }
  return out;
}

template <class V>
GameVariant<V> parse_game_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  return parse_game<V>(j);
}

template <class V>
nlohmann::json emit_game(const ConcurrentGame<V>& g) {
  nlohmann::json j;
  j["kind"] = "concurrent";
  j["states"] = g.states;
  nlohmann::json m1 = nlohmann::json::object(), m2 = nlohmann::json::object();
  nlohmann::json trs = nlohmann::json::array();
  for (int s = 0; s < g.num_states(); ++s) {
    m1[g.states[s]] = g.moves1[s];
    m2[g.states[s]] = g.moves2[s];
    for (std::size_t a = 0; a < g.moves1[s].size(); ++a)
      for (std::size_t b = 0; b < g.moves2[s].size(); ++b) {
        nlohmann::json tr;
        tr["from"] = g.states[s];
        tr["a1"] = g.moves1[s][a];
        tr["a2"] = g.moves2[s][b];
        nlohmann::json dist = nlohmann::json::object();
        for (const auto& [t, p] : g.delta[s][a][b].entries)
          dist[g.states[t]] = format_number(p);
        tr["dist"] = std::move(dist);
        trs.push_back(std::move(tr));
      }
  }
  j["moves1"] = std::move(m1);
  j["moves2"] = std::move(m2);
  j["transitions"] = std::move(trs);
  return j;
}

template <class V>
nlohmann::json emit_game(const TurnBasedGame<V>& g) {
  nlohmann::json j;
  j["kind"] = "turn-based";
  j["states"] = g.states;
  nlohmann::json owner = nlohmann::json::object(), edges = nlohmann::json::object(),
                 dist = nlohmann::json::object();
  for (int s = 0; s < g.num_states(); ++s) {
    owner[g.states[s]] = g.owner[s] == Owner::player1   ? "p1"
                         : g.owner[s] == Owner::player2 ? "p2"
                                                        : "random";
    std::vector<std::string> e;
    for (int t : g.edges[s]) e.push_back(g.states[t]);
    edges[g.states[s]] = e;
    if (g.owner[s] == Owner::random) {
      nlohmann::json d = nlohmann::json::object();
      for (const auto& [t, p] : g.dist[s].entries) d[g.states[t]] = format_number(p);
      dist[g.states[s]] = std::move(d);
    }
  }
  j["owner"] = std::move(owner);
  j["edges"] = std::move(edges);
  if (!dist.empty()) j["dist"] = std::move(dist);
  return j;
}

// ---------------------------------------------------------------------------
// Results and traces

template <class V>
nlohmann::json emit_valuation(const std::vector<std::string>& states, const Valuation<V>& v) {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t s = 0; s < states.size(); ++s) j[states[s]] = format_number(v[s]);
  return j;
}

template <class V>
nlohmann::json emit_strategy(const ConcurrentGame<V>& g, const Selector<V>& sel) {
  nlohmann::json j = nlohmann::json::object();
  for (int s = 0; s < g.num_states(); ++s) {
    nlohmann::json row = nlohmann::json::object();
    for (const auto& [m, w] : sel.choice[s].entries)
      row[g.moves(sel.player, s)[m]] = format_number(w);
    j[g.states[s]] = std::move(row);
  }
  return j;
}

inline nlohmann::json emit_certificate(Certificate cert, double epsilon) {
  nlohmann::json j;
  j["type"] = to_string(cert);
  if (cert == Certificate::epsilon_approx) j["epsilon"] = epsilon;
  return j;
}

template <class V>
nlohmann::json emit_trace(const std::vector<std::string>& states, const SiTrace<V>& trace,
                          Certificate cert, double epsilon) {
  nlohmann::json j;
  nlohmann::json iters = nlohmann::json::array();
  for (const auto& it : trace.iterations) {
    nlohmann::json e;
    e["i"] = it.index;
    e["kind"] = to_string(it.kind);
    std::vector<std::string> changed;
    for (int s : it.changed) changed.push_back(states[s]);
    e["changed"] = changed;
    e["v"] = emit_valuation(states, it.value);
    iters.push_back(std::move(e));
  }
  j["iterations"] = std::move(iters);
  j["total_iterations"] = trace.total_iterations;
  j["truncated"] = trace.truncated;
  j["certificate"] = emit_certificate(cert, epsilon);
  return j;
}

inline nlohmann::json emit_bounds(const BoundsReport& r) {
  nlohmann::json j;
  j["turn_based"] = r.turn_based;
  j["binary"] = r.binary;
  if (r.denominator_applicable)
    j["denominator_bound"] = r.denominator_bound.str();
  else
    j["denominator_bound"] = "n/a";
  if (r.strategy_applicable)
    j["pure_strategy_bound"] = r.pure_strategy_bound.str();
  else
    j["pure_strategy_bound"] = "n/a";
  if (r.si_applicable)
    j["si_iteration_bound"] = r.si_iteration_bound.str();
  else
    j["si_iteration_bound"] = "n/a";
  j["transition_bits"] = r.transition_bits;
  j["transition_bits_approximate"] = r.bits_approximate;
  j["k_uniform"] = format_number(r.k_uniform);
  j["k_uniform_iterations_log10"] = format_number(r.k_uniform_iterations_log10);
  return j;
}

}  // namespace csg
