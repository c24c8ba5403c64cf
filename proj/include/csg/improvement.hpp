#pragma once

// Strategy improvement: the safety algorithm with its turn-based reduction
// for the non-local step, the reachability algorithm over proper selectors,
// value iteration, the dovetailed two-sided epsilon termination scheme, and
// the termination-bound calculators.

#include "csg/game.hpp"
#include "csg/matrix_game.hpp"
#include "csg/mdp.hpp"
#include "csg/qualitative.hpp"

#include <cmath>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace csg {

struct Config {
  double epsilon = 1e-6;   // dovetail termination tolerance
  double tau_eq = 1e-9;    // comparison tolerance in floating mode
  int max_iters = 10000;
  int threads = 1;
  int trace_cap = 1000;
  bool oracle_check = false;
};

template <class V>
Cmp<V> make_cmp(const Config& c) {
  if constexpr (is_rational_backend<V>)
    return Cmp<V>{Rational(0)};
  else
    return Cmp<V>{c.tau_eq};
}

enum class StepKind { local_pre, tb_almost_sure, none };
enum class Certificate { optimal, epsilon_approx, iteration_cap };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::local_pre: return "local-Pre";
    case StepKind::tb_almost_sure: return "tb-almost-sure";
    default: return "none";
  }
}

inline const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::optimal: return "optimal";
    case Certificate::epsilon_approx: return "epsilon";
    default: return "iteration-cap";
  }
}

template <class V>
struct SiIteration {
  int index = 0;
  Valuation<V> value;
  Selector<V> selector;
  StepKind kind = StepKind::none;
  IndexSet changed;
};

template <class V>
struct SiTrace {
  std::vector<SiIteration<V>> iterations;
  int total_iterations = 0;
  bool truncated = false;
};

template <class V>
struct SolveResult {
  Valuation<V> values;
  Selector<V> strategy;
  Certificate certificate = Certificate::iteration_cap;
  SiTrace<V> trace;
  IndexSet w1;  // safety: almost-sure winning set
  IndexSet w2;  // reachability: value-zero set
  int iterations = 0;
};

namespace detail {

template <class V>
class TraceRecorder {
 public:
  explicit TraceRecorder(int cap) : head_cap_(cap / 2), tail_cap_(cap - cap / 2) {}

  void push(SiIteration<V> it) {
    ++total_;
    if (static_cast<int>(head_.size()) < head_cap_) {
      head_.push_back(std::move(it));
    } else {
      if (static_cast<int>(tail_.size()) == tail_cap_) {
        tail_.pop_front();
        truncated_ = true;
      }
      tail_.push_back(std::move(it));
    }
  }

  SiTrace<V> trace() const {
    SiTrace<V> t;
    t.iterations = head_;
    t.iterations.insert(t.iterations.end(), tail_.begin(), tail_.end());
    t.total_iterations = total_;
    t.truncated = truncated_;
    return t;
  }

 private:
  int head_cap_;
  int tail_cap_;
  std::vector<SiIteration<V>> head_;
  std::deque<SiIteration<V>> tail_;
  int total_ = 0;
  bool truncated_ = false;
};

template <class V>
bool selectors_equal(const Selector<V>& a, const Selector<V>& b, const Cmp<V>& cmp) {
  if (a.choice.size() != b.choice.size()) return false;
  for (std::size_t s = 0; s < a.choice.size(); ++s) {
    IndexSet moves = set_union(a.choice[s].support(), b.choice[s].support());
    for (int m : moves)
      if (cmp.ne(a.choice[s].prob(m), b.choice[s].prob(m))) return false;
  }
  return true;
}

}  // namespace detail

/// Statewise Pre_1 with optimal selectors; per-state games are independent
/// and run on `threads` workers, merged in state order.
template <class V>
std::vector<PreResult<V>> pre_one_all(const ConcurrentGame<V>& g, const Valuation<V>& v,
                                      int threads = 1) {
  const int n = g.num_states();
  std::vector<PreResult<V>> out(n);
  if (threads <= 1 || n < 2) {
    for (int s = 0; s < n; ++s) out[s] = pre_one(g, v, s);
    return out;
  }
  const int workers = std::min(threads, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (int s = w; s < n; s += workers) out[s] = pre_one(g, v, s);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

// ---------------------------------------------------------------------------
// Turn-based reduction

/// The auxiliary game TB(G, v, F): original states are player-1 states that
/// pick a pair (A, B) from OptSelCount(v, s); player 2 answers with some
/// b in B; the probabilistic state (s, A, b) moves uniformly over
/// Dest(s, A, b).
template <class V>
struct TbReduction {
  TurnBasedGame<V> game;
  IndexSet safe_set;  // F-bar
  struct Node {
    int orig = -1;     // original state
    int pair = -1;     // index into pairs[orig], -1 for original states
    int move_b = -1;   // player-2 move for (s,A,b) nodes, -1 otherwise
  };
  std::vector<Node> origin;                      // per reduction state
  std::vector<std::vector<SupportPair<V>>> pairs;  // per original state
};

template <class V>
TbReduction<V> tb_reduction(const ConcurrentGame<V>& g, const Valuation<V>& v, const IndexSet& F,
                            const Cmp<V>& cmp = {}) {
  const int n = g.num_states();
  TbReduction<V> red;
  red.pairs.resize(n);
  for (int s = 0; s < n; ++s) {
    red.pairs[s] = opt_sel_count(g, v, s, cmp);
    if (red.pairs[s].empty()) {
      // Floating-mode fallback: the positivity floor can reject every
      // enumerated support; fall back to the plain LP witness.
      PreResult<V> pr = pre_one(g, v, s);
      Selector<V> tmp;
      tmp.player = 1;
      tmp.choice.assign(n, Distribution<V>::point(0));
      tmp.choice[s] = pr.selector;
      red.pairs[s].push_back(
          {pr.selector.support(), counter_optimal(g, v, s, tmp, cmp), pr.selector});
    }
  }

  TurnBasedGame<V>& tb = red.game;
  auto move_set_name = [&](int s, const IndexSet& ids, int player) {
    std::string out = "{";
    for (std::size_t i = 0; i < ids.size(); ++i)
      out += (i ? "," : "") + g.moves(player, s)[ids[i]];
    return out + "}";
  };

  // Original states first, then (s,A,B) pair nodes, then (s,A,b) nodes.
  for (int s = 0; s < n; ++s) {
    tb.states.push_back(g.states[s]);
    tb.owner.push_back(Owner::player1);
    red.origin.push_back({s, -1, -1});
  }
  std::vector<std::vector<int>> pair_node(n);   // per (s, pair idx)
  for (int s = 0; s < n; ++s) {
    for (int k = 0; k < static_cast<int>(red.pairs[s].size()); ++k) {
      const auto& pr = red.pairs[s][k];
      tb.states.push_back("(" + g.states[s] + "," + move_set_name(s, pr.support1, 1) + "," +
                          move_set_name(s, pr.counter2, 2) + ")");
      tb.owner.push_back(Owner::player2);
      red.origin.push_back({s, k, -1});
      pair_node[s].push_back(static_cast<int>(tb.states.size()) - 1);
    }
  }
  std::vector<std::vector<std::vector<int>>> b_node(n);  // per (s, pair idx, b position)
  for (int s = 0; s < n; ++s) {
    b_node[s].resize(red.pairs[s].size());
    for (int k = 0; k < static_cast<int>(red.pairs[s].size()); ++k) {
      for (int b : red.pairs[s][k].counter2) {
        tb.states.push_back("(" + g.states[s] + "," + move_set_name(s, red.pairs[s][k].support1, 1) +
                            "," + g.moves2[s][b] + ")");
        tb.owner.push_back(Owner::random);
        red.origin.push_back({s, k, b});
        b_node[s][k].push_back(static_cast<int>(tb.states.size()) - 1);
      }
    }
  }

  const int total = static_cast<int>(tb.states.size());
  tb.edges.resize(total);
  tb.dist.resize(total);
  for (int s = 0; s < n; ++s) tb.edges[s] = IndexSet(pair_node[s].begin(), pair_node[s].end());
  for (int s = 0; s < n; ++s) {
    for (int k = 0; k < static_cast<int>(red.pairs[s].size()); ++k) {
      tb.edges[pair_node[s][k]] = set_sorted(IndexSet(b_node[s][k].begin(), b_node[s][k].end()));
      const auto& pr = red.pairs[s][k];
      for (std::size_t pos = 0; pos < pr.counter2.size(); ++pos) {
        int node = b_node[s][k][pos];
        IndexSet dest = destinations(g, s, pr.support1, {pr.counter2[pos]});
        tb.edges[node] = dest;
        tb.dist[node] = Distribution<V>::uniform(dest);
      }
    }
  }

  for (int node = 0; node < total; ++node)
    if (set_contains(F, red.origin[node].orig)) red.safe_set.push_back(node);
  return red;
}

// ---------------------------------------------------------------------------
// Safety strategy improvement

template <class V>
struct StepResult {
  Selector<V> selector;
  StepKind kind = StepKind::none;
  IndexSet changed;
};

/// One improvement step of the safety algorithm: local Pre-based improvement
/// where Pre_1(v) > v, otherwise the non-local step through the almost-sure
/// safety analysis of TB(G, v, F). Expects W1 and S \ F absorbing and
/// v = value of gamma (checked unless `check_value` is off).
template <class V>
StepResult<V> safety_improve_step(const ConcurrentGame<V>& g, const IndexSet& F,
                                  const Selector<V>& gamma, const Valuation<V>& v,
                                  const Config& config = {}, bool check_value = true) {
  const int n = g.num_states();
  Cmp<V> cmp = make_cmp<V>(config);
  if (check_value) {
    Valuation<V> actual = safety_value_of_selector(g, gamma, F);
    for (int s = 0; s < n; ++s)
      if (cmp.ne(actual[s], v[s]))
        throw std::runtime_error("safety_improve_step: v does not match the value of gamma at '" +
                                 g.states[s] + "'");
  }
  IndexSet W1 = almost_sure_safe_concurrent(g, 1, F).winning;
  IndexSet frozen = set_union(W1, set_complement(F, n));
  std::vector<PreResult<V>> pre = pre_one_all(g, v, config.threads);

  IndexSet I;
  for (int s = 0; s < n; ++s)
    if (!set_contains(frozen, s) && cmp.gt(pre[s].value, v[s])) I.push_back(s);
  if (!I.empty()) {
    StepResult<V> out{gamma, StepKind::local_pre, I};
    for (int s : I) out.selector.choice[s] = pre[s].selector;
    if (detail::selectors_equal(out.selector, gamma, cmp))
      return {gamma, StepKind::none, {}};  // rounding guard
    return out;
  }

  TbReduction<V> red = tb_reduction(g, v, F, cmp);
  QualitativeResult safe = almost_sure_safe_tb(red.game, 1, red.safe_set);
  IndexSet abar;
  for (int node : safe.winning)
    if (node < n) abar.push_back(node);
  IndexSet U = set_difference(abar, W1);
  if (!U.empty()) {
    StepResult<V> out{gamma, StepKind::tb_almost_sure, U};
    for (int s : U) {
      int chosen = safe.tb_choice.at(s);  // the (s,A,B) node picked by the witness
      out.selector.choice[s] = red.pairs[s][red.origin[chosen].pair].witness;
    }
    if (detail::selectors_equal(out.selector, gamma, cmp))
      return {gamma, StepKind::none, {}};  // rounding guard: no real change
    return out;
  }
  return {gamma, StepKind::none, {}};
}

/// Stepwise driver for the safety algorithm; also used by the dovetail.
template <class V>
class SafetyImprover {
 public:
  SafetyImprover(const ConcurrentGame<V>& g, IndexSet F, const Config& config)
      : config_(config), recorder_(config.trace_cap), F_(set_sorted(std::move(F))) {
    w1_ = almost_sure_safe_concurrent(g, 1, F_).winning;
    IndexSet T = set_complement(F_, g.num_states());
    game_ = make_absorbing(g, set_union(w1_, T));
    gamma_ = uniform_selector(game_, 1);
    value_ = safety_value_of_selector(game_, gamma_, F_);
  }

  StepKind step() {
    StepResult<V> r = safety_improve_step(game_, F_, gamma_, value_, config_, false);
    recorder_.push({iterations_, value_, gamma_, r.kind, r.changed});
    ++iterations_;
    if (r.kind == StepKind::none) {
      finished_ = true;
      return r.kind;
    }
    gamma_ = std::move(r.selector);
    value_ = safety_value_of_selector(game_, gamma_, F_);
    return r.kind;
  }

  bool finished() const { return finished_; }
  const Valuation<V>& value() const { return value_; }
  const Selector<V>& selector() const { return gamma_; }
  const IndexSet& w1() const { return w1_; }
  const ConcurrentGame<V>& game() const { return game_; }

  SolveResult<V> result(Certificate cert) const {
    SolveResult<V> out;
    out.values = value_;
    out.strategy = gamma_;
    out.certificate = cert;
    out.trace = recorder_.trace();
    out.w1 = w1_;
    out.iterations = iterations_;
    return out;
  }

 private:
  Config config_;
  detail::TraceRecorder<V> recorder_;
  IndexSet F_;
  IndexSet w1_;
  ConcurrentGame<V> game_;
  Selector<V> gamma_;
  Valuation<V> value_;
  int iterations_ = 0;
  bool finished_ = false;
};

/// Algorithm: compute W1, absorb W1 and S \ F, start from the uniform
/// selector and improve until no step applies (optimal) or the cap.
template <class V>
SolveResult<V> solve_safety_si(const ConcurrentGame<V>& g, const IndexSet& F,
                               const Config& config = {}) {
  SafetyImprover<V> imp(g, F, config);
  Certificate cert = Certificate::iteration_cap;
  for (int i = 0; i < config.max_iters; ++i)
    if (imp.step() == StepKind::none) {
      cert = Certificate::optimal;
      break;
    }
  return imp.result(cert);
}

template <class V>
SolveResult<V> solve_safety_si(const TurnBasedGame<V>& tb, const IndexSet& F,
                               const Config& config = {}) {
  return solve_safety_si(to_concurrent(tb), F, config);
}

// ---------------------------------------------------------------------------
// Reachability strategy improvement

/// Pure attractor selector for a turn-based game: guaranteed proper, used
/// as the initial selector so the iteration stays within pure selectors.
template <class V>
Selector<V> attractor_selector(const TurnBasedGame<V>& tb, const IndexSet& T) {
  ConcurrentGame<V> g = to_concurrent(tb);
  IndexSet W2 = reach_value_zero_set(make_absorbing(g, T), T).winning;
  QualitativeResult attr = attractor_tb(tb, 1, set_union(T, W2));
  Selector<V> sel;
  sel.player = 1;
  sel.choice.assign(tb.num_states(), Distribution<V>::point(0));
  for (const auto& [s, t] : attr.tb_choice) {
    const IndexSet& e = tb.edges[s];
    int idx = static_cast<int>(std::find(e.begin(), e.end(), t) - e.begin());
    sel.choice[s] = Distribution<V>::point(idx);
  }
  return sel;
}

/// Stepwise driver for reachability strategy improvement. Absorbs T and the
/// value-zero region W2, keeps every iterate proper, improves at the states
/// where Pre_1(v) exceeds v.
template <class V>
class ReachImprover {
 public:
  ReachImprover(const ConcurrentGame<V>& g, IndexSet T, const Config& config,
                std::optional<Selector<V>> init = std::nullopt)
      : config_(config), recorder_(config.trace_cap), T_(set_sorted(std::move(T))) {
    ConcurrentGame<V> g1 = make_absorbing(g, T_);
    w2_ = reach_value_zero_set(g1, T_).winning;
    game_ = make_absorbing(g1, w2_);
    goal_ = set_union(T_, w2_);
    if (init) {
      xi_ = std::move(*init);
      for (int s : goal_) xi_.choice[s] = Distribution<V>::point(0);
    } else {
      xi_ = uniform_selector(game_, 1);
    }
    value_ = compute_value();
  }

  StepKind step() {
    Cmp<V> cmp = make_cmp<V>(config_);
    std::vector<PreResult<V>> pre = pre_one_all(game_, value_, config_.threads);
    IndexSet I;
    for (int s = 0; s < game_.num_states(); ++s)
      if (!set_contains(goal_, s) && cmp.gt(pre[s].value, value_[s])) I.push_back(s);
    Selector<V> next = xi_;
    for (int s : I) next.choice[s] = pre[s].selector;
    if (!I.empty() && detail::selectors_equal(next, xi_, cmp)) I.clear();  // rounding guard
    recorder_.push({iterations_, value_, xi_,
                    I.empty() ? StepKind::none : StepKind::local_pre, I});
    ++iterations_;
    if (I.empty()) {
      finished_ = true;
      return StepKind::none;
    }
    xi_ = std::move(next);
    value_ = compute_value();
    return StepKind::local_pre;
  }

  bool finished() const { return finished_; }
  const Valuation<V>& value() const { return value_; }
  const Selector<V>& selector() const { return xi_; }
  const IndexSet& w2() const { return w2_; }
  const ConcurrentGame<V>& game() const { return game_; }

  SolveResult<V> result(Certificate cert) const {
    SolveResult<V> out;
    out.values = value_;
    out.strategy = xi_;
    out.certificate = cert;
    out.trace = recorder_.trace();
    out.w2 = w2_;
    out.iterations = iterations_;
    return out;
  }

 private:
  Valuation<V> compute_value() {
    try {
      return reach_value_of_selector(game_, xi_, T_, w2_);
    } catch (const std::exception& e) {
      throw std::runtime_error("reach SI iteration " + std::to_string(iterations_) + ": " +
                               e.what());
    }
  }

  Config config_;
  detail::TraceRecorder<V> recorder_;
  IndexSet T_;
  IndexSet w2_;
  IndexSet goal_;
  ConcurrentGame<V> game_;
  Selector<V> xi_;
  Valuation<V> value_;
  int iterations_ = 0;
  bool finished_ = false;
};

/// Reachability strategy improvement from the uniform selector (proper once
/// W2 is absorbed).
template <class V>
SolveResult<V> solve_reach_si(const ConcurrentGame<V>& g, const IndexSet& T,
                              const Config& config = {}) {
  ReachImprover<V> imp(g, T, config);
  Certificate cert = Certificate::iteration_cap;
  for (int i = 0; i < config.max_iters; ++i)
    if (imp.step() == StepKind::none) {
      cert = Certificate::optimal;
      break;
    }
  return imp.result(cert);
}

/// Turn-based variant: starts from the pure attractor selector, so all
/// iterates are pure and the iteration terminates.
template <class V>
SolveResult<V> solve_reach_si(const TurnBasedGame<V>& tb, const IndexSet& T,
                              const Config& config = {}) {
  ReachImprover<V> imp(to_concurrent(tb), T, config, attractor_selector(tb, T));
  Certificate cert = Certificate::iteration_cap;
  for (int i = 0; i < config.max_iters; ++i)
    if (imp.step() == StepKind::none) {
      cert = Certificate::optimal;
      break;
    }
  return imp.result(cert);
}

// ---------------------------------------------------------------------------
// Value iteration

/// Reach mode: u_0 = [T], u_{k+1} = [T] v Pre_1(u_k), nondecreasing, from
/// below. Safe mode: v_0 = [F], v_{k+1} = [F] ^ Pre_1(v_k), nonincreasing,
/// from above. Stops early at an exact fixpoint.
template <class V>
Valuation<V> value_iteration(const ConcurrentGame<V>& g, const Objective& obj, int iters,
                             const Config& config = {}) {
  const int n = g.num_states();
  Valuation<V> u = indicator_valuation<V>(n, obj.set);
  for (int k = 0; k < iters; ++k) {
    std::vector<PreResult<V>> pre = pre_one_all(g, u, config.threads);
    Valuation<V> next(n);
    for (int s = 0; s < n; ++s) {
      bool inset = set_contains(obj.set, s);
      if (obj.kind == Objective::Kind::reach)
        next[s] = inset ? V(1) : pre[s].value;
      else
        next[s] = inset ? pre[s].value : V(0);
    }
    if (next == u) break;
    u = std::move(next);
  }
  return u;
}

template <class V>
Valuation<V> value_iteration(const TurnBasedGame<V>& tb, const Objective& obj, int iters,
                             const Config& config = {}) {
  return value_iteration(to_concurrent(tb), obj, iters, config);
}

// ---------------------------------------------------------------------------
// Dovetail

template <class V>
struct DovetailResult {
  Valuation<V> safe_lower;   // v_i <= v1(Safe(F))
  Valuation<V> reach_lower;  // u_i <= v2(Reach(S \ F)), so v1 <= 1 - u_i
  Certificate certificate = Certificate::iteration_cap;
  SolveResult<V> safety;
  SolveResult<V> reach;
  V gap{};  // max_s (1 - u_i - v_i) at termination
};

namespace detail {

template <class V>
DovetailResult<V> dovetail_core(SafetyImprover<V>& si, ReachImprover<V>& ri,
                                const Config& config) {
  V eps = from_double<V>(config.epsilon);
  Certificate cert = Certificate::iteration_cap;
  for (int round = 0; round < config.max_iters; ++round) {
    if (si.step() == StepKind::none) {
      cert = Certificate::optimal;
      break;
    }
    if (ri.step() == StepKind::none) {
      cert = Certificate::optimal;
      break;
    }
    V min_sum(2);
    for (std::size_t s = 0; s < si.value().size(); ++s) {
      V sum = si.value()[s] + ri.value()[s];
      if (sum < min_sum) min_sum = sum;
    }
    if (min_sum >= V(1) - eps) {
      cert = Certificate::epsilon_approx;
      break;
    }
  }
  DovetailResult<V> out;
  out.safe_lower = si.value();
  out.reach_lower = ri.value();
  out.certificate = cert;
  out.safety = si.result(cert);
  out.reach = ri.result(cert);
  out.gap = V(0);
  for (std::size_t s = 0; s < out.safe_lower.size(); ++s) {
    V g = V(1) - out.reach_lower[s] - out.safe_lower[s];
    if (g > out.gap) out.gap = g;
  }
  return out;
}

}  // namespace detail

/// Dovetails the safety algorithm for player 1 on Safe(F) with reachability
/// improvement for player 2 on Reach(S \ F), one step per side per round,
/// safety first. Stops when either side fixes (optimal) or when
/// min_s (v_i + u_i) >= 1 - epsilon.
template <class V>
DovetailResult<V> solve_dovetail(const ConcurrentGame<V>& g, const IndexSet& F,
                                 const Config& config = {}) {
  if (config.epsilon <= 0) throw std::invalid_argument("dovetail: epsilon must be positive");
  SafetyImprover<V> si(g, F, config);
  ReachImprover<V> ri(swap_players(g), set_complement(F, g.num_states()), config);
  return detail::dovetail_core(si, ri, config);
}

template <class V>
DovetailResult<V> solve_dovetail(const TurnBasedGame<V>& tb, const IndexSet& F,
                                 const Config& config = {}) {
  if (config.epsilon <= 0) throw std::invalid_argument("dovetail: epsilon must be positive");
  SafetyImprover<V> si(to_concurrent(tb), F, config);
  TurnBasedGame<V> swapped = swap_players(tb);
  IndexSet T = set_complement(F, tb.num_states());
  ReachImprover<V> ri(to_concurrent(swapped), T, config, attractor_selector(swapped, T));
  return detail::dovetail_core(si, ri, config);
}

// ---------------------------------------------------------------------------
// Termination bounds

struct BoundsReport {
  bool turn_based = false;
  bool binary = false;
  bool denominator_applicable = false;
  BigInt denominator_bound = 0;      // 4^(|S_R|-1), binary turn-based only
  bool strategy_applicable = false;
  BigInt pure_strategy_bound = 0;    // prod over player-1 states of |E(s)|
  bool si_applicable = false;
  BigInt si_iteration_bound = 0;     // |S| * 4^(|S_R|-1)
  long long transition_bits = 0;     // |delta|
  bool bits_approximate = false;     // floating probabilities, dyadic reading
  double k_uniform = 0;              // 192 |S|^4 ln(4|delta|) / eps^2
  double k_uniform_iterations_log10 = 0;  // log10 of k^(2|delta|)
};

namespace detail {

inline void fill_k_uniform(BoundsReport& r, int num_states, double epsilon) {
  double bits = static_cast<double>(r.transition_bits);
  double s = static_cast<double>(num_states);
  r.k_uniform = 192.0 * s * s * s * s * std::log(4.0 * bits) / (epsilon * epsilon);
  r.k_uniform_iterations_log10 = 2.0 * bits * std::log10(r.k_uniform);
}

}  // namespace detail

template <class V>
BoundsReport termination_bounds(const TurnBasedGame<V>& g, double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("termination_bounds: epsilon must be positive");
  BoundsReport r;
  r.turn_based = true;
  r.bits_approximate = !is_rational_backend<V>;
  int sr = 0;
  r.binary = true;
  for (int s = 0; s < g.num_states(); ++s) {
    if (g.owner[s] != Owner::random) continue;
    ++sr;
    const auto& d = g.dist[s];
    if (d.entries.size() > 2) r.binary = false;
    if (d.entries.size() == 2)
      for (const auto& [t, p] : d.entries)
        if (!(p == V(1) / V(2))) r.binary = false;
    for (const auto& [t, p] : d.entries) r.transition_bits += bit_size(p);
  }
  if (r.binary && sr >= 1) {
    r.denominator_applicable = true;
    r.denominator_bound = boost::multiprecision::pow(BigInt(4), sr - 1);
    r.si_applicable = true;
    r.si_iteration_bound = BigInt(g.num_states()) * r.denominator_bound;
  }
  r.strategy_applicable = true;
  r.pure_strategy_bound = 1;
  for (int s = 0; s < g.num_states(); ++s)
    if (g.owner[s] == Owner::player1)
      r.pure_strategy_bound *= BigInt(static_cast<int>(g.edges[s].size()));
  detail::fill_k_uniform(r, g.num_states(), epsilon);
  return r;
}

template <class V>
BoundsReport termination_bounds(const ConcurrentGame<V>& g, double epsilon) {
  if (epsilon <= 0) throw std::invalid_argument("termination_bounds: epsilon must be positive");
  BoundsReport r;
  r.bits_approximate = !is_rational_backend<V>;
  for (int s = 0; s < g.num_states(); ++s)
    for (const auto& row : g.delta[s])
      for (const auto& d : row)
        for (const auto& [t, p] : d.entries) r.transition_bits += bit_size(p);
  detail::fill_k_uniform(r, g.num_states(), epsilon);
  return r;
}

}  // namespace csg
