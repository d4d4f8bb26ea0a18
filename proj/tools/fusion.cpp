// Command-line front end. Automaton arguments are files (text or JSON) or
// "zoo:NAME" for the built-in examples.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fusion/fusion.hpp"
#include "fusion/http.hpp"
#include "fusion/session.hpp"

using namespace fusion;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TreeAutomaton load_automaton(const std::string& arg) {
  if (arg.rfind("zoo:", 0) == 0) return automaton_param(arg);
  return parse_automaton_any(slurp(arg));
}

std::vector<TreeAutomaton> load_automata(const std::vector<std::string>& args) {
  std::vector<TreeAutomaton> out;
  for (const auto& a : args) out.push_back(load_automaton(a));
  return out;
}

LabeledTree load_labeled_tree(const std::string& arg) {
  if (arg.rfind("zoo:", 0) == 0) return LabeledTree::constant(automaton_param(arg));
  return parse_labeled_tree_any(slurp(arg));
}

void write_trace(const std::string& path, const std::string& jsonl) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path);
  out << jsonl;
}

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

// Reads one Adam bit per round from stdin ("0" or "1"); empty input ends the
// play early.
std::optional<int> read_bit(std::size_t round) {
  std::cerr << "round " << round << ", bit> " << std::flush;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line == "0" || line == "1") return line[0] - '0';
    if (line.empty() || line == "q") return std::nullopt;
    std::cerr << "enter 0 or 1 (q to stop)> " << std::flush;
  }
  return std::nullopt;
}

Word adam_word(const std::string& given, std::size_t depth) {
  Word w(given);
  while (w.size() < depth) w = w.child(0);
  return w.prefix(depth);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact workbench for fusion games on Cantor space"};
  app.require_subcommand(1);

  // measure
  std::string file, ideal = "E", base;
  std::vector<std::string> words;
  auto* measure_cmd = app.add_subcommand("measure", "exact measure of a closed set, or of a clopen set");
  measure_cmd->add_option("automaton", file, "automaton file or zoo:NAME");
  measure_cmd->add_option("--clopen", words, "generators of a clopen set instead")->delimiter(',');
  measure_cmd->add_option("--base", base, "relative to this cylinder (clopen only)");

  auto* member_cmd = app.add_subcommand("member", "decide membership of a closed set in an ideal");
  member_cmd->add_option("--ideal", ideal, "E, NWD or CTBL")->capture_default_str();
  member_cmd->add_option("automaton", file)->required();

  auto* dich_cmd = app.add_subcommand("dichotomy", "member certificate or I-perfect kernel");
  dich_cmd->add_option("--ideal", ideal)->capture_default_str();
  dich_cmd->add_option("automaton", file)->required();

  auto* kernel_cmd = app.add_subcommand("kernel", "I-perfect kernel as an automaton");
  kernel_cmd->add_option("--ideal", ideal)->capture_default_str();
  kernel_cmd->add_option("automaton", file)->required();

  std::vector<std::string> avoid;
  auto* escape_cmd = app.add_subcommand("escape", "a point of a positive set outside given member sets");
  escape_cmd->add_option("--ideal", ideal)->capture_default_str();
  escape_cmd->add_option("--avoid", avoid, "member sets to avoid")->delimiter(',');
  escape_cmd->add_option("automaton", file)->required();

  // play-e
  std::vector<std::string> covers;
  std::string target, trace_path, adam_bits;
  std::size_t depth = 6;
  bool interactive = false;
  auto* play_e = app.add_subcommand("play-e", "closed-null game: Adam against the synthesized Eve");
  play_e->add_option("--covers", covers, "closed null covers")->delimiter(',');
  play_e->add_option("--target", target, "the set A (default: union of the covers)");
  play_e->add_option("--depth", depth)->capture_default_str();
  play_e->add_option("--adam", adam_bits, "Adam's branch (padded with zeros)");
  play_e->add_flag("--interactive", interactive, "read Adam's bits from stdin");
  play_e->add_option("--trace", trace_path, "write the play as JSONL");

  // play-pc
  std::string decomposition, oracle = "identity", domain;
  auto* play_pc = app.add_subcommand("play-pc", "piecewise-continuity game: Adam against the synthesized Eve");
  play_pc->add_option("--decomposition", decomposition, "JSON array of monotone codes")->required();
  play_pc->add_option("--oracle", oracle, "identity or count-ones")->capture_default_str();
  play_pc->add_option("--domain", domain, "the set B (default: zoo:FULL)");
  play_pc->add_option("--depth", depth)->capture_default_str();
  play_pc->add_option("--adam", adam_bits, "Adam's branch (padded with zeros)");
  play_pc->add_flag("--interactive", interactive);
  play_pc->add_option("--trace", trace_path);

  // play-unfolded
  std::string tree, adam_kind = "auto", eve_kind = "counterplay";
  auto* play_u = app.add_subcommand("play-unfolded", "unfolded game on a labeled tree");
  play_u->add_option("--tree", tree, "labeled tree file, automaton file or zoo:NAME")->required();
  play_u->add_option("--ideal", ideal)->capture_default_str();
  play_u->add_option("--covers", covers, "closed member covers for Eve's counterplay")->delimiter(',');
  play_u->add_option("--depth", depth, "rounds")->capture_default_str();
  play_u->add_option("--adam", adam_kind, "synth, lexmin or auto")->capture_default_str();
  play_u->add_option("--eve", eve_kind, "counterplay, empty or whole")->capture_default_str();
  play_u->add_option("--trace", trace_path);

  // solve
  std::size_t horizon = 4, max_length = 9;
  std::string strategy_path;
  auto* solve_cmd = app.add_subcommand("solve", "solve the finite surrogate closed-null game on A");
  solve_cmd->add_option("automaton", file, "the set A")->required();
  solve_cmd->add_option("--horizon", horizon)->capture_default_str();
  solve_cmd->add_option("--max-length", max_length, "longest generator Eve may use")->capture_default_str();
  solve_cmd->add_option("--strategy", strategy_path, "write the winning strategy tree as JSON");

  // serve
  int port = 8080;
  std::string host = "127.0.0.1";
  auto* serve_cmd = app.add_subcommand("serve", "HTTP session service");
  serve_cmd->add_option("--port", port)->capture_default_str();
  serve_cmd->add_option("--host", host)->capture_default_str();

  // scheme
  auto* scheme_cmd = app.add_subcommand("scheme", "Souslin schemes");
  scheme_cmd->require_subcommand(1);
  auto* scheme_validate_cmd = scheme_cmd->add_subcommand("validate", "check the scheme conditions");
  scheme_validate_cmd->add_option("--depth", depth)->capture_default_str();
  scheme_validate_cmd->add_option("file", file, "scheme JSON")->required();
  auto* scheme_closure_cmd = scheme_cmd->add_subcommand("closure", "clopen approximation of the closure");
  scheme_closure_cmd->add_option("--depth", depth)->capture_default_str();
  scheme_closure_cmd->add_option("file", file)->required();

  // baire
  auto* baire_cmd = app.add_subcommand("baire", "Baire space inside Cantor space");
  baire_cmd->require_subcommand(1);
  std::vector<std::size_t> blocks;
  std::size_t partial = 0;
  auto* embed_cmd = baire_cmd->add_subcommand("embed", "tuple prefix to word");
  embed_cmd->add_option("blocks", blocks, "n0,n1,...")->delimiter(',');
  embed_cmd->add_option("--partial", partial, "zeros of an unfinished block");
  auto* pre_cmd = baire_cmd->add_subcommand("preimage", "clopen set to tuple cylinders");
  pre_cmd->add_option("words", words)->delimiter(',')->required();

  CLI11_PARSE(app, argc, argv);

  try {
    IdealOracle io = IdealOracle::parse(ideal);

    if (*measure_cmd) {
      if (!words.empty() || file.empty()) {
        ClopenSet c(std::vector<Word>(words.begin(), words.end()));
        json j{{"clopen", c}, {"measure", to_string(measure(c))}};
        if (!base.empty() || measure_cmd->count("--base")) j["relative_measure"] = to_string(measure(c, Word(base)));
        print(j);
      } else {
        print({{"measure", to_string(branch_measure(load_automaton(file)))}});
      }
    } else if (*member_cmd) {
      print({{"ideal", io.name()}, {"member", io.member(load_automaton(file))}});
    } else if (*dich_cmd) {
      print(dichotomy_json(io, dichotomy(io, load_automaton(file))));
    } else if (*kernel_cmd) {
      std::cout << format_automaton(kernel(load_automaton(file), io));
    } else if (*escape_cmd) {
      print(escape_point(load_automaton(file), load_automata(avoid), io));
    } else if (*play_e) {
      auto cs = load_automata(covers);
      TreeAutomaton a;
      if (!target.empty()) {
        a = load_automaton(target);
      } else {
        for (const auto& c : cs) a = combine(a, c, SetOp::unite);
      }
      auto eve = null_eve_synthesize(cs);
      auto scheme = null_game_scheme();
      Word branch = adam_word(adam_bits, depth);
      std::vector<NullMove> play;
      for (std::size_t n = 1; n <= depth; ++n) {
        Word xi;
        if (interactive) {
          auto b = read_bit(n);
          if (!b) break;
          xi = null_game::last_word(play).child(*b);
        } else {
          xi = branch.prefix(n);
        }
        play.emplace_back(xi);
        NullMove c = eve(play);
        if (auto v = scheme.check(play, c)) throw IllegalMove(Player::eve, n, *v);
        const auto& cc = std::get<ClopenSet>(c);
        play.push_back(c);
        json line{{"round", n},
                  {"xi", xi},
                  {"C", cc},
                  {"relative_measure", to_string(measure(cc, xi))},
                  {"status", to_json_value(null_payoff_status(play, a))}};
        std::cout << line.dump() << "\n";
      }
      write_trace(trace_path, trace_jsonl(play));
    } else if (*play_pc) {
      auto codes = json::parse(slurp(decomposition)).get<std::vector<MonotoneCode>>();
      TreeAutomaton b = domain.empty() ? zoo::full() : load_automaton(domain);
      FunctionOracle g;
      if (oracle == "identity")
        g = identity_oracle();
      else if (oracle == "count-ones")
        g = count_ones_oracle();
      else
        throw BadParams("unknown oracle " + oracle);
      auto eve = pc_eve_synthesize(codes);
      auto scheme = pc_game_scheme();
      Word branch = adam_word(adam_bits, depth);
      std::vector<PcMove> play;
      for (std::size_t n = 1; n <= depth; ++n) {
        Word xi;
        if (interactive) {
          auto bit = read_bit(n);
          if (!bit) break;
          xi = pc_game::last_word(play).child(*bit);
        } else {
          xi = branch.prefix(n);
        }
        play.emplace_back(xi);
        PcMove h = eve(play);
        if (auto v = scheme.check(play, h)) throw IllegalMove(Player::eve, n, *v);
        play.push_back(h);
        json outputs = json::array();
        for (const auto& m : std::get<1>(h)) {
          PartialEval e = eval_partial(m, xi);
          outputs.push_back({{"output", e.output}, {"inside", e.inside}});
        }
        json line{{"round", n},
                  {"xi", xi},
                  {"maps", outputs},
                  {"g", g.determined(xi)},
                  {"status", to_json_value(pc_payoff_status(play, b, g))}};
        std::cout << line.dump() << "\n";
      }
      write_trace(trace_path, trace_jsonl(play));
    } else if (*play_u) {
      LabeledTree t = load_labeled_tree(tree);
      bool positive = io.positive(proj(t));
      Responder<UnfoldedMove> adam;
      if (adam_kind == "synth" || (adam_kind == "auto" && positive))
        adam = unfolded_adam_synthesize(t, io);
      else if (adam_kind == "lexmin" || adam_kind == "auto")
        adam = unfolded_lexmin_adam(t);
      else
        throw BadParams("unknown Adam " + adam_kind);
      Responder<UnfoldedMove> eve;
      if (eve_kind == "counterplay")
        eve = unfolded_eve_counterplay(t, io, load_automata(covers));
      else if (eve_kind == "empty")
        eve = unfolded_empty_eve();
      else if (eve_kind == "whole")
        eve = [](std::span<const UnfoldedMove>) -> UnfoldedMove { return ClopenSet::whole(); };
      else
        throw BadParams("unknown Eve " + eve_kind);
      auto play = simulate(unfolded_scheme(t, io), adam, eve, depth);
      for (std::size_t n = 1; n <= depth; ++n) {
        std::span<const UnfoldedMove> prefix(play.data(), 2 * n);
        json line{{"round", n},
                  {"tau", std::get<LabeledWord>(play[2 * n - 2])},
                  {"O", std::get<ClopenSet>(play[2 * n - 1])},
                  {"pair", PairingFunction::rho(n - 1)},
                  {"columns", columns_json(column_status(prefix))}};
        std::cout << line.dump() << "\n";
      }
      write_trace(trace_path, trace_jsonl(play));
    } else if (*solve_cmd) {
      auto a = load_automaton(file);
      auto gt = null_surrogate_tree(a, horizon, max_length);
      auto sol = solve_bounded(gt);
      print({{"winner", to_string(sol.winner)}, {"nodes", gt.size()}, {"horizon", horizon}, {"max_length", max_length}});
      if (!strategy_path.empty()) {
        std::ofstream out(strategy_path);
        out << json{{"owner", to_string(sol.strategy.owner)}, {"root", tree_json(sol.strategy.root)}}.dump(2) << "\n";
      }
    } else if (*serve_cmd) {
      SessionManager sessions;
      httplib::Server server;
      install_routes(server, sessions);
      std::cerr << "listening on http://" << host << ":" << port << "\n";
      if (!server.listen(host, port)) {
        std::cerr << "cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
    } else if (*scheme_cmd) {
      auto s = parse_scheme_json(json::parse(slurp(file)));
      if (*scheme_validate_cmd) {
        auto v = scheme_validate(s, depth);
        if (v)
          print({{"ok", false}, {"clause", v->clause}, {"detail", v->detail}});
        else
          print({{"ok", true}});
        return v ? 2 : 0;
      }
      print({{"closure", closure_approx(s, depth)}});
    } else if (*baire_cmd) {
      if (*embed_cmd) {
        print({{"word", baire_embed({blocks, partial})}});
      } else {
        print({{"cylinders", baire_preimage(ClopenSet(std::vector<Word>(words.begin(), words.end())))}});
      }
    }
  } catch (const IllegalMove& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.code() << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
