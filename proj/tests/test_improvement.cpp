#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"

using namespace csg;
using fixtures::ex1;
using fixtures::hide;

namespace {

template <class V>
Selector<V> point_selector(const ConcurrentGame<V>& g, std::vector<int> picks) {
  Selector<V> s;
  s.player = 1;
  for (int m : picks) s.choice.push_back(Distribution<V>::point(m));
  (void)g;
  return s;
}

}  // namespace

TEST_CASE("tb_reduction structure") {
  SECTION("single pair with a deterministic destination") {
    // one optimal pair ({a},{x}) with Dest = {t}
    ConcurrentGame<Rational> g;
    g.states = {"s", "t"};
    g.moves1 = {{"a"}, {"a"}};
    g.moves2 = {{"x"}, {"x"}};
    g.delta = {{{Distribution<Rational>::point(1)}}, {{Distribution<Rational>::point(1)}}};
    Valuation<Rational> v = {Rational(1, 2), Rational(1, 2)};
    auto red = tb_reduction(g, v, {0, 1});
    // states: s, t, (s,{a},{x}), (t,{a},{x}), (s,{a},x), (t,{a},x)
    REQUIRE(red.game.num_states() == 6);
    CHECK(red.game.owner[0] == Owner::player1);
    CHECK(red.game.owner[2] == Owner::player2);
    CHECK(red.game.owner[4] == Owner::random);
    CHECK(red.game.edges[0] == IndexSet{2});   // s -> (s,{a},{x})
    CHECK(red.game.edges[2] == IndexSet{4});   // -> (s,{a},x)
    CHECK(red.game.edges[4] == IndexSet{1});   // -> t
    CHECK(red.game.dist[4] == Distribution<Rational>::point(1));
    CHECK(red.safe_set.size() == 6);           // F = S lifts to all of S-bar
  }
  SECTION("HIDE at the field value: one pair, two uniform random nodes") {
    auto g = hide<Rational>();
    Valuation<Rational> v = {Rational(1), Rational(1, 2), Rational(0)};
    auto red = tb_reduction(g, v, fixtures::hide_safe_set());
    REQUIRE(red.pairs[1].size() == 1);
    // field's pair node has two b-children, each uniform over {home,caught}
    int pair_node = red.game.edges[1][0];
    CHECK(red.game.owner[pair_node] == Owner::player2);
    REQUIRE(red.game.edges[pair_node].size() == 2);
    for (int bnode : red.game.edges[pair_node]) {
      CHECK(red.game.owner[bnode] == Owner::random);
      CHECK(red.game.edges[bnode] == IndexSet({0, 2}));
      CHECK(red.game.dist[bnode].prob(0) == Rational(1, 2));
      CHECK(red.game.dist[bnode].prob(2) == Rational(1, 2));
    }
  }
}

TEST_CASE("safety_improve_step") {
  SECTION("an optimal selector yields kind none") {
    auto g0 = hide<Rational>();
    IndexSet F = fixtures::hide_safe_set();
    IndexSet W1 = almost_sure_safe_concurrent(g0, 1, F).winning;
    auto g = make_absorbing(g0, set_union(W1, set_complement(F, 3)));
    auto gamma = uniform_selector(g, 1);
    auto v = safety_value_of_selector(g, gamma, F);
    auto r = safety_improve_step(g, F, gamma, v);
    CHECK(r.kind == StepKind::none);
  }
  SECTION("a dominated initial selector is improved by the local step") {
    // two moves at s0, both risky so s0 stays out of W1, with "better"
    // dominating "worse" for Safe({s0, good})
    ConcurrentGame<Rational> g;
    g.states = {"s0", "good", "bad"};
    g.moves1 = {{"worse", "better"}, {"x"}, {"x"}};
    g.moves2 = {{"y"}, {"y"}, {"y"}};
    g.delta = {{{Distribution<Rational>({{1, Rational(1, 2)}, {2, Rational(1, 2)}})},
                {Distribution<Rational>({{1, Rational(3, 4)}, {2, Rational(1, 4)}})}},
               {{Distribution<Rational>::point(1)}},
               {{Distribution<Rational>::point(2)}}};
    IndexSet F = {0, 1};
    auto gamma = point_selector(g, {0, 0, 0});  // worse
    auto v = safety_value_of_selector(g, gamma, F);
    CHECK(v[0] == Rational(1, 2));
    auto r = safety_improve_step(g, F, gamma, v);
    CHECK(r.kind == StepKind::local_pre);
    CHECK(r.changed == IndexSet{0});
    CHECK(r.selector.choice[0] == Distribution<Rational>::point(1));
    CHECK(safety_value_of_selector(g, r.selector, F)[0] == Rational(3, 4));
  }
  SECTION("mismatched valuation precondition is reported") {
    auto g0 = hide<Rational>();
    IndexSet F = fixtures::hide_safe_set();
    auto g = make_absorbing(g0, IndexSet{0, 2});
    auto gamma = uniform_selector(g, 1);
    Valuation<Rational> wrong = {Rational(1), Rational(1, 4), Rational(0)};
    CHECK_THROWS_WITH(safety_improve_step(g, F, gamma, wrong),
                      Catch::Matchers::ContainsSubstring("does not match"));
  }
}

TEST_CASE("EX1: the plateau needs the non-local step") {
  auto tb = ex1<Rational>();
  auto g0 = to_concurrent(tb);
  IndexSet F = fixtures::ex1_safe_set();
  IndexSet W1 = almost_sure_safe_concurrent(g0, 1, F).winning;
  CHECK(W1 == IndexSet({4, 5}));
  auto g = make_absorbing(g0, set_union(W1, IndexSet{6}));

  // the stalling strategy: s0 -> s2 (move index 1 at s0)
  auto gamma = point_selector(g, {1, 0, 0, 0, 0, 0, 0});
  auto v = safety_value_of_selector(g, gamma, F);
  CHECK(v[0] == Rational(1, 3));
  CHECK(v[1] == Rational(1, 3));
  CHECK(v[2] == Rational(1, 3));
  CHECK(v[3] == Rational(2, 3));

  SECTION("Pre-based improvement is stuck: I is empty") {
    auto pre = pre_one_all(g, v);
    for (int s = 0; s < g.num_states(); ++s) CHECK(pre[s].value == v[s]);
  }
  SECTION("the turn-based almost-sure step escapes through s0") {
    auto r = safety_improve_step(g, F, gamma, v);
    CHECK(r.kind == StepKind::tb_almost_sure);
    CHECK(set_contains(r.changed, 0));
    CHECK(r.selector.choice[0] == Distribution<Rational>::point(0));  // s0 -> s1
    auto v2 = safety_value_of_selector(g, r.selector, F);
    CHECK(v2[0] == Rational(2, 3));
  }
  SECTION("the full algorithm reaches 2/3 with certificate optimal") {
    auto res = solve_safety_si(tb, F);
    CHECK(res.certificate == Certificate::optimal);
    CHECK(res.values[0] == Rational(2, 3));
    CHECK(res.values[1] == Rational(2, 3));
    CHECK(res.values[2] == Rational(1, 3));
    bool used_tb_step = false;
    for (const auto& it : res.trace.iterations)
      used_tb_step |= it.kind == StepKind::tb_almost_sure;
    CHECK(used_tb_step);
  }
}

TEST_CASE("solve_safety_si") {
  SECTION("F = S terminates immediately at one") {
    auto g = hide<Rational>();
    auto res = solve_safety_si(g, {0, 1, 2});
    CHECK(res.certificate == Certificate::optimal);
    CHECK(res.values == Valuation<Rational>(3, Rational(1)));
    CHECK(res.trace.iterations.size() == 1);
    CHECK(res.trace.iterations[0].kind == StepKind::none);
  }
  SECTION("HIDE: field is worth one half") {
    auto res = solve_safety_si(hide<Rational>(), fixtures::hide_safe_set());
    CHECK(res.certificate == Certificate::optimal);
    CHECK(res.values[0] == Rational(1));
    CHECK(res.values[1] == Rational(1, 2));
    CHECK(res.values[2] == Rational(0));
    CHECK(res.w1 == IndexSet{0});
  }
}

TEST_CASE("solve_reach_si") {
  SECTION("T = S is immediately one") {
    auto res = solve_reach_si(hide<Rational>(), IndexSet{0, 1, 2});
    CHECK(res.certificate == Certificate::optimal);
    CHECK(res.values == Valuation<Rational>(3, Rational(1)));
  }
  SECTION("EX1 complement: determinacy pins the sum to one") {
    auto tb = ex1<Rational>();
    IndexSet F = fixtures::ex1_safe_set();
    auto safe = solve_safety_si(tb, F);
    auto reach = solve_reach_si(swap_players(tb), IndexSet{6});
    REQUIRE(safe.certificate == Certificate::optimal);
    REQUIRE(reach.certificate == Certificate::optimal);
    for (int s = 0; s < tb.num_states(); ++s)
      CHECK(safe.values[s] + reach.values[s] == Rational(1));
  }
  SECTION("pure attractor selectors keep turn-based iterates pure") {
    std::mt19937 rng(137);
    for (int round = 0; round < 10; ++round) {
      auto tb = fixtures::random_turn_based<Rational>(rng);
      IndexSet T = fixtures::random_proper_subset(rng, tb.num_states());
      auto res = solve_reach_si(tb, T);
      CHECK(res.certificate == Certificate::optimal);
      for (const auto& it : res.trace.iterations) CHECK(it.selector.is_pure());
    }
  }
}

TEST_CASE("value_iteration") {
  auto g = hide<Rational>();
  SECTION("zero rounds returns the indicator") {
    auto u = value_iteration(g, {Objective::Kind::reach, {0}}, 0);
    CHECK(u == indicator_valuation<Rational>(3, {0}));
  }
  SECTION("one safe round at field gives the matrix game value") {
    auto v = value_iteration(g, {Objective::Kind::safe, fixtures::hide_safe_set()}, 1);
    CHECK(v[1] == Rational(1, 2));
    CHECK(v[0] == Rational(1));
    CHECK(v[2] == Rational(0));
  }
  SECTION("monotone in the round count, direction per mode") {
    std::mt19937 rng(139);
    for (int round = 0; round < 15; ++round) {
      auto rg = fixtures::random_concurrent<Rational>(rng, 4);
      IndexSet set = fixtures::random_proper_subset(rng, rg.num_states());
      Valuation<Rational> prev_r = value_iteration(rg, {Objective::Kind::reach, set}, 0);
      Valuation<Rational> prev_s = value_iteration(rg, {Objective::Kind::safe, set}, 0);
      for (int k = 1; k <= 6; ++k) {
        auto ur = value_iteration(rg, {Objective::Kind::reach, set}, k);
        auto us = value_iteration(rg, {Objective::Kind::safe, set}, k);
        for (int s = 0; s < rg.num_states(); ++s) {
          CHECK(ur[s] >= prev_r[s]);
          CHECK(us[s] <= prev_s[s]);
        }
        prev_r = ur;
        prev_s = us;
      }
    }
  }
}

TEST_CASE("solve_dovetail") {
  SECTION("HIDE: both sides meet exactly at one half") {
    Config config;
    config.epsilon = 1e-3;
    auto dv = solve_dovetail(hide<Rational>(), fixtures::hide_safe_set(), config);
    CHECK(dv.certificate == Certificate::optimal);
    CHECK(dv.safe_lower[1] == Rational(1, 2));
    CHECK(dv.reach_lower[1] == Rational(1, 2));
    CHECK(dv.safe_lower[1] + dv.reach_lower[1] == Rational(1));
  }
  SECTION("turn-based games certify optimal") {
    std::mt19937 rng(149);
    for (int round = 0; round < 15; ++round) {
      auto tb = fixtures::random_turn_based<Rational>(rng);
      IndexSet F = fixtures::random_proper_subset(rng, tb.num_states());
      auto dv = solve_dovetail(tb, F, {});
      CHECK(dv.certificate == Certificate::optimal);
      for (int s = 0; s < tb.num_states(); ++s)
        CHECK(dv.safe_lower[s] + dv.reach_lower[s] <= Rational(1));
    }
  }
  SECTION("random concurrent games meet the epsilon gap") {
    std::mt19937 rng(151);
    Config config;
    config.epsilon = 1e-2;
    for (int round = 0; round < 10; ++round) {
      auto g = fixtures::random_concurrent<double>(rng, 3);
      IndexSet F = fixtures::random_proper_subset(rng, g.num_states());
      auto dv = solve_dovetail(g, F, config);
      if (dv.certificate == Certificate::epsilon_approx) CHECK(dv.gap <= config.epsilon);
      CHECK(dv.certificate != Certificate::iteration_cap);
      for (std::size_t s = 0; s < dv.safe_lower.size(); ++s)
        CHECK(dv.safe_lower[s] + dv.reach_lower[s] <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("improvement lemma properties on random games") {
  std::mt19937 rng(157);
  Config config;
  config.max_iters = 60;
  SECTION("safety traces are monotone; local steps dominate Pre") {
    for (int round = 0; round < 20; ++round) {
      auto g = fixtures::random_concurrent<Rational>(rng, 4);
      IndexSet F = fixtures::random_proper_subset(rng, g.num_states());
      auto res = solve_safety_si(g, F, config);
      auto absorbed =
          make_absorbing(g, set_union(res.w1, set_complement(F, g.num_states())));
      const auto& iters = res.trace.iterations;
      for (std::size_t i = 0; i + 1 < iters.size(); ++i) {
        bool strict = false;
        for (int s = 0; s < g.num_states(); ++s) {
          CHECK(iters[i + 1].value[s] >= iters[i].value[s]);
          strict |= iters[i + 1].value[s] > iters[i].value[s];
        }
        CHECK(strict);  // selector changed, so the valuation strictly grew
        if (iters[i].kind == StepKind::local_pre) {
          auto pre = pre_one_all(absorbed, iters[i].value);
          for (int s = 0; s < g.num_states(); ++s)
            CHECK(iters[i + 1].value[s] >= pre[s].value);
        }
      }
    }
  }
  SECTION("reachability iterates stay proper") {
    for (int round = 0; round < 15; ++round) {
      auto g = fixtures::random_concurrent<Rational>(rng, 4);
      IndexSet T = fixtures::random_proper_subset(rng, g.num_states());
      auto res = solve_reach_si(g, T, config);
      auto g1 = make_absorbing(g, T);
      auto g2 = make_absorbing(g1, res.w2);
      IndexSet goal = set_union(T, res.w2);
      for (const auto& it : res.trace.iterations) CHECK(is_proper(g2, it.selector, goal));
    }
  }
}

TEST_CASE("termination_bounds") {
  SECTION("binary turn-based game with three random states") {
    TurnBasedGame<Rational> g;
    g.states = {"r0", "r1", "r2", "p", "q"};
    g.owner = {Owner::random, Owner::random, Owner::random, Owner::player1, Owner::player2};
    g.edges = {{3, 4}, {0, 3}, {3}, {0, 1}, {2, 3}};
    g.dist.resize(5);
    g.dist[0] = Distribution<Rational>({{3, Rational(1, 2)}, {4, Rational(1, 2)}});
    g.dist[1] = Distribution<Rational>({{0, Rational(1, 2)}, {3, Rational(1, 2)}});
    g.dist[2] = Distribution<Rational>::point(3);
    auto r = termination_bounds(g, 0.1);
    CHECK(r.turn_based);
    CHECK(r.binary);
    REQUIRE(r.denominator_applicable);
    CHECK(r.denominator_bound == 16);  // 4^(3-1)
    CHECK(r.si_iteration_bound == 80);
    CHECK(r.pure_strategy_bound == 2);  // one player-1 state with two edges
  }
  SECTION("pure strategy count is the product of player-1 degrees") {
    TurnBasedGame<Rational> g;
    g.states = {"a", "b"};
    g.owner = {Owner::player1, Owner::player1};
    g.edges = {{0, 1}, {0, 1}};
    g.dist.resize(2);
    auto r = termination_bounds(g, 0.5);
    CHECK(r.pure_strategy_bound == 4);
    CHECK_FALSE(r.denominator_applicable);  // no random states
  }
  SECTION("k-uniform bound evaluates the formula") {
    // two states, deterministic 1x1 self loops: each probability 1 costs
    // bits(1)+bits(1) = 2, so |delta| = 4
    ConcurrentGame<Rational> g;
    g.states = {"a", "b"};
    g.moves1 = {{"x"}, {"x"}};
    g.moves2 = {{"y"}, {"y"}};
    g.delta = {{{Distribution<Rational>::point(0)}}, {{Distribution<Rational>::point(1)}}};
    auto r = termination_bounds(g, 0.1);
    CHECK(r.transition_bits == 4);
    double expect = 192.0 * 16.0 * std::log(16.0) / 0.01;
    CHECK(std::abs(r.k_uniform - expect) < 1e-6 * expect);
    CHECK(std::abs(r.k_uniform_iterations_log10 - 8.0 * std::log10(expect)) < 1e-9);
    CHECK_THROWS_AS(termination_bounds(g, 0.0), std::invalid_argument);
  }
}

TEST_CASE("threaded Pre evaluation is deterministic") {
  std::mt19937 rng(163);
  auto g = fixtures::random_concurrent<double>(rng, 5);
  auto v = fixtures::random_valuation<double>(rng, g.num_states());
  auto serial = pre_one_all(g, v, 1);
  auto parallel = pre_one_all(g, v, 4);
  for (int s = 0; s < g.num_states(); ++s) {
    CHECK(serial[s].value == parallel[s].value);
    CHECK(serial[s].selector == parallel[s].selector);
  }
}
