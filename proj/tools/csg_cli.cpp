// Command-line front end: parse a game file, dispatch the solvers, emit
// machine-readable JSON and a human-readable summary.
//
// Exit codes: 0 solved (optimal / epsilon-approximate), 2 input or config
// error, 3 iteration cap reached, 4 solver failure.

#include "csg/csg.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

namespace {

struct Options {
  std::string command;
  std::string game_path;
  std::string objective = "safe";
  std::string states_csv;
  std::string mode = "dovetail";
  double epsilon = 1e-6;
  double tau_eq = 1e-9;
  int max_iters = 10000;
  int iters = 0;  // oracle rounds
  int threads = 1;
  std::string backend = "float";
  std::string output_path;
  std::string trace_path;
  bool check_oracle = false;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw csg::ParseError("cannot open game file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(csv);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_json(const nlohmann::json& j, const std::string& path) {
  std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

template <class V, class Game>
csg::IndexSet resolve_states(const Game& g, const std::string& csv) {
  csg::IndexSet out;
  for (const std::string& name : split_csv(csv)) {
    try {
      out.push_back(g.state_index(name));
    } catch (const std::exception& e) {
      throw csg::ParseError(std::string("--states: ") + e.what());
    }
  }
  return csg::set_sorted(std::move(out));
}

template <class V, class Game>
void print_summary(const Game& g, const csg::Valuation<V>& values,
                   const csg::Valuation<V>* upper, const std::string& cert) {
  std::cerr << "state            value";
  if (upper) std::cerr << "            upper";
  std::cerr << "\n";
  for (int s = 0; s < g.num_states(); ++s) {
    std::cerr << g.states[s];
    for (std::size_t k = g.states[s].size(); k < 17; ++k) std::cerr << ' ';
    std::cerr << csg::format_number(values[s]);
    if (upper) std::cerr << "  " << csg::format_number((*upper)[s]);
    std::cerr << "\n";
  }
  std::cerr << "certificate: " << cert << "\n";
}

template <class V>
int run_solve(const Options& opt) {
  using namespace csg;
  Config config;
  config.epsilon = opt.epsilon;
  config.tau_eq = opt.tau_eq;
  config.max_iters = opt.max_iters;
  config.threads = opt.threads;
  config.oracle_check = opt.check_oracle;

  GameVariant<V> gv = parse_game_text<V>(read_input(opt.game_path));
  const bool safe = opt.objective == "safe";

  return std::visit(
      [&](const auto& game) -> int {
        IndexSet set = resolve_states<V>(game, opt.states_csv);
        if (set.empty()) throw ParseError("--states: objective set must be nonempty");
        ConcurrentGame<V> conc;
        if constexpr (std::is_same_v<std::decay_t<decltype(game)>, TurnBasedGame<V>>)
          conc = to_concurrent(game);
        else
          conc = game;

        nlohmann::json out;
        Certificate cert = Certificate::optimal;
        Valuation<V> values;
        std::optional<Valuation<V>> upper;
        int iterations = 0;

        if (opt.mode == "vi") {
          Objective obj{safe ? Objective::Kind::safe : Objective::Kind::reach, set};
          values = value_iteration(game, obj, opt.max_iters, config);
          out["certificate"] = {{"type", "value-iteration"}, {"rounds", opt.max_iters}};
          out["values"] = emit_valuation(game.states, values);
          out["iterations"] = opt.max_iters;
        } else if (opt.mode == "si") {
          SolveResult<V> r = safe ? solve_safety_si(game, set, config)
                                  : solve_reach_si(game, set, config);
          cert = r.certificate;
          values = r.values;
          iterations = r.iterations;
          out["values"] = emit_valuation(game.states, values);
          out["strategy"] = emit_strategy(conc, r.strategy);
          out["certificate"] = emit_certificate(cert, config.epsilon);
          out["iterations"] = iterations;
          if (!safe)
            out["notes"] = {"value-1 absorption skipped for reachability; T and W2 absorbed"};
          if (!opt.trace_path.empty())
            write_json(emit_trace(game.states, r.trace, cert, config.epsilon), opt.trace_path);
        } else if (opt.mode == "dovetail") {
          DovetailResult<V> dv = [&] {
            if (safe) return solve_dovetail(game, set, config);
            auto swapped = swap_players(game);
            return solve_dovetail(swapped, set_complement(set, game.num_states()), config);
          }();
          cert = dv.certificate;
          const SolveResult<V>& primary = safe ? dv.safety : dv.reach;
          const Valuation<V>& lower = safe ? dv.safe_lower : dv.reach_lower;
          const Valuation<V>& opp = safe ? dv.reach_lower : dv.safe_lower;
          values = lower;
          upper = Valuation<V>(lower.size());
          for (std::size_t s = 0; s < lower.size(); ++s) (*upper)[s] = V(1) - opp[s];
          iterations = dv.safety.iterations + dv.reach.iterations;
          out["values"] = emit_valuation(game.states, values);
          out["upper_values"] = emit_valuation(game.states, *upper);
          out["gap"] = format_number(dv.gap);
          // primary strategy: for safe the safety side is player 1's; for
          // reach the reach side runs on the original orientation
          const ConcurrentGame<V> emit_game_form = safe ? conc : conc;
          out["strategy"] = emit_strategy(emit_game_form, primary.strategy);
          out["certificate"] = emit_certificate(cert, config.epsilon);
          out["iterations"] = iterations;
          if (!opt.trace_path.empty())
            write_json(emit_trace(game.states, primary.trace, cert, config.epsilon),
                       opt.trace_path);
        } else {
          throw ParseError("--mode must be si|vi|dovetail");
        }

        if (opt.check_oracle && opt.mode != "vi") {
          Objective obj{safe ? Objective::Kind::safe : Objective::Kind::reach, set};
          Valuation<V> vi = value_iteration(game, obj, 10000, config);
          double gap = 0;
          for (std::size_t s = 0; s < values.size(); ++s)
            gap = std::max(gap, std::abs(to_double(vi[s]) - to_double(values[s])));
          out["oracle_gap"] = format_number(gap);
          std::cerr << "value-iteration oracle gap: " << format_number(gap) << "\n";
        }

        write_json(out, opt.output_path);
        std::string cert_str = out["certificate"].contains("type")
                                   ? out["certificate"]["type"].get<std::string>()
                                   : "?";
        print_summary<V>(game, values, upper ? &*upper : nullptr, cert_str);
        return opt.mode != "vi" && cert == Certificate::iteration_cap ? 3 : 0;
      },
      gv);
}

template <class V>
int run_bounds(const Options& opt) {
  using namespace csg;
  GameVariant<V> gv = parse_game_text<V>(read_input(opt.game_path));
  BoundsReport r = std::visit(
      [&](const auto& game) { return termination_bounds(game, opt.epsilon); }, gv);
  write_json(emit_bounds(r), opt.output_path);
  return 0;
}

template <class V>
int run_validate(const Options& opt) {
  using namespace csg;
  GameVariant<V> gv = parse_game_text<V>(read_input(opt.game_path));
  std::visit(
      [&](const auto& game) {
        std::cerr << "ok: " << game.num_states() << " states\n";
      },
      gv);
  return 0;
}

template <class V>
int run_oracle(const Options& opt) {
  using namespace csg;
  Config config;
  config.tau_eq = opt.tau_eq;
  config.threads = opt.threads;
  GameVariant<V> gv = parse_game_text<V>(read_input(opt.game_path));
  return std::visit(
      [&](const auto& game) -> int {
        IndexSet set = resolve_states<V>(game, opt.states_csv);
        Objective obj{opt.objective == "safe" ? Objective::Kind::safe : Objective::Kind::reach,
                      set};
        Valuation<V> v = value_iteration(game, obj, opt.iters, config);
        nlohmann::json out;
        out["values"] = emit_valuation(game.states, v);
        out["iterations"] = opt.iters;
        write_json(out, opt.output_path);
        print_summary<V>(game, v, nullptr, "value-iteration");
        return 0;
      },
      gv);
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"concurrent / turn-based stochastic game solver"};
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--game", opt.game_path, "game file (JSON), '-' for stdin")->required();
    cmd->add_option("--backend", opt.backend, "numeric backend: float|rational")
        ->check(CLI::IsMember({"float", "rational"}));
    cmd->add_option("--output", opt.output_path, "result JSON path (default stdout)");
  };

  CLI::App* solve = app.add_subcommand("solve", "solve an objective");
  add_common(solve);
  solve->add_option("--objective", opt.objective, "safe|reach")
      ->check(CLI::IsMember({"safe", "reach"}));
  solve->add_option("--states", opt.states_csv, "objective state set, comma separated")
      ->required();
  solve->add_option("--mode", opt.mode, "si|vi|dovetail (default dovetail)")
      ->check(CLI::IsMember({"si", "vi", "dovetail"}));
  solve->add_option("--epsilon", opt.epsilon, "dovetail tolerance (default 1e-6)");
  solve->add_option("--tau-eq", opt.tau_eq, "comparison tolerance (default 1e-9)");
  solve->add_option("--max-iters", opt.max_iters, "iteration cap (default 10000)");
  solve->add_option("--threads", opt.threads, "worker threads for per-state games");
  solve->add_option("--trace", opt.trace_path, "write the improvement trace JSON here");
  solve->add_flag("--check-oracle", opt.check_oracle,
                  "cross-check against value iteration and report the gap");

  CLI::App* bounds = app.add_subcommand("bounds", "termination bound report");
  add_common(bounds);
  bounds->add_option("--epsilon", opt.epsilon, "tolerance for the k-uniform bound");

  CLI::App* validate = app.add_subcommand("validate", "check a game file");
  add_common(validate);

  CLI::App* oracle = app.add_subcommand("oracle", "value-iteration oracle");
  add_common(oracle);
  oracle->add_option("--objective", opt.objective, "safe|reach")
      ->check(CLI::IsMember({"safe", "reach"}));
  oracle->add_option("--states", opt.states_csv, "objective state set")->required();
  oracle->add_option("--iters", opt.iters, "number of rounds")->required();
  oracle->add_option("--tau-eq", opt.tau_eq, "comparison tolerance");
  oracle->add_option("--threads", opt.threads, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }
  opt.command = app.get_subcommands().front()->get_name();

  try {
    bool rational = opt.backend == "rational";
    if (opt.command == "solve")
      return rational ? run_solve<csg::Rational>(opt) : run_solve<double>(opt);
    if (opt.command == "bounds")
      return rational ? run_bounds<csg::Rational>(opt) : run_bounds<double>(opt);
    if (opt.command == "validate")
      return rational ? run_validate<csg::Rational>(opt) : run_validate<double>(opt);
    if (opt.command == "oracle")
      return rational ? run_oracle<csg::Rational>(opt) : run_oracle<double>(opt);
    std::cerr << "unknown command\n";
    return 2;
  } catch (const csg::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 4;
  }
}
