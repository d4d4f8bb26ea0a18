#pragma once

// Live game sessions: a human side plays against the synthesized opponent.
// Every state change goes through the game module's rule check; sessions are
// deterministic functions of their parameters and the human's moves.

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/null_game.hpp"
#include "fusion/pc_game.hpp"
#include "fusion/unfolded.hpp"

namespace fusion {

enum class GameKind { g_e, g_pc, g_unfolded };

inline std::string to_string(GameKind k) {
  switch (k) {
    case GameKind::g_e: return "G_E";
    case GameKind::g_pc: return "G_pc";
    case GameKind::g_unfolded: return "G_unfolded";
  }
  return "?";
}

inline GameKind parse_game_kind(const std::string& s) {
  if (s == "G_E") return GameKind::g_e;
  if (s == "G_pc") return GameKind::g_pc;
  if (s == "G_unfolded") return GameKind::g_unfolded;
  throw BadParams("unknown game kind \"" + s + "\" (expected G_E, G_pc or G_unfolded)");
}

inline Player parse_player(const std::string& s) {
  if (s == "Adam" || s == "adam") return Player::adam;
  if (s == "Eve" || s == "eve") return Player::eve;
  throw BadParams("unknown side \"" + s + "\" (expected Adam or Eve)");
}

/// "zoo:NAME", automaton text, or an automaton JSON object.
inline TreeAutomaton automaton_param(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.rfind("zoo:", 0) == 0) {
      auto t = zoo::by_name(s.substr(4));
      if (!t) throw BadParams("unknown zoo automaton \"" + s.substr(4) + "\"");
      return *t;
    }
    return parse_automaton_any(s);
  }
  return j.get<TreeAutomaton>();
}

inline std::vector<TreeAutomaton> automata_param(const nlohmann::json& params, const char* key) {
  std::vector<TreeAutomaton> out;
  if (params.contains(key))
    for (const auto& e : params.at(key)) out.push_back(automaton_param(e));
  return out;
}

inline LabeledTree labeled_tree_param(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s.rfind("zoo:", 0) == 0) return LabeledTree::constant(automaton_param(j));
    return parse_labeled_tree_any(s);
  }
  return LabeledTree::constant(automaton_param(j));
}

inline nlohmann::json clopen_view(const ClopenSet& c, const std::optional<Word>& base = std::nullopt) {
  nlohmann::json j{{"words", c}, {"measure", to_string(measure(c))}};
  if (base) j["relative_measure"] = to_string(measure(c, *base));
  return j;
}

namespace detail {

struct NullDriver {
  std::vector<TreeAutomaton> covers;
  TreeAutomaton target;
  Responder<NullMove> eve;
  std::vector<NullMove> play;

  using Move = NullMove;

  static NullDriver create(const nlohmann::json& params, Player human) {
    if (human != Player::adam)
      throw BadParams("G_E sessions need a human Adam (no machine Adam is synthesized for this game)");
    NullDriver d;
    d.covers = automata_param(params, "covers");
    d.eve = null_eve_synthesize(d.covers);
    if (params.contains("target")) {
      d.target = automaton_param(params.at("target"));
    } else {
      for (const auto& c : d.covers) d.target = combine(d.target, c, SetOp::unite);
    }
    return d;
  }
  CheckResult check(const Move& m) const { return validate_null_move(round_of(play.size()), play, m); }
  Move machine() const { return eve(play); }

  nlohmann::json view() const {
    nlohmann::json clopens = nlohmann::json::array();
    Word xi;
    for (std::size_t i = 0; i < play.size(); ++i) {
      if (const auto* w = std::get_if<Word>(&play[i])) {
        xi = *w;
      } else {
        auto v = clopen_view(std::get<ClopenSet>(play[i]), xi);
        v["round"] = round_of(i);
        clopens.push_back(v);
      }
    }
    Word at = null_game::last_word(play);
    std::size_t n = round_of(play.size());
    nlohmann::json hints;
    if (to_move(play.size()) == Player::adam)
      hints = {{"adam", {at.child(0), at.child(1)}}};
    else
      hints = {{"eve", "clopen inside [" + at.str() + "] of relative measure below 1/" + std::to_string(n)}};
    return {{"clopens", clopens}, {"xi", at}, {"status", to_json_value(null_payoff_status(play, target))},
            {"hints", hints}};
  }
};

struct PcDriver {
  std::vector<MonotoneCode> decomposition;
  TreeAutomaton domain;
  FunctionOracle g;
  Responder<PcMove> eve;
  std::vector<PcMove> play;

  using Move = PcMove;

  static PcDriver create(const nlohmann::json& params, Player human) {
    if (human != Player::adam)
      throw BadParams("G_pc sessions need a human Adam (no machine Adam is synthesized for this game)");
    PcDriver d;
    try {
      if (params.contains("decomposition")) d.decomposition = params.at("decomposition").get<std::vector<MonotoneCode>>();
    } catch (const Error& e) {
      throw BadParams(e.what());
    }
    d.domain = params.contains("domain") ? automaton_param(params.at("domain")) : zoo::full();
    std::string oracle = params.value("oracle", std::string("identity"));
    if (oracle == "identity")
      d.g = identity_oracle();
    else if (oracle == "count-ones")
      d.g = count_ones_oracle();
    else
      throw BadParams("unknown function oracle \"" + oracle + "\" (expected identity or count-ones)");
    d.eve = pc_eve_synthesize(d.decomposition);
    return d;
  }
  CheckResult check(const Move& m) const { return validate_pc_move(round_of(play.size()), play, m); }
  Move machine() const { return eve(play); }

  nlohmann::json view() const {
    Word at = pc_game::last_word(play);
    nlohmann::json maps = nlohmann::json::array();
    for (const auto& h : pc_game::last_maps(play)) {
      PartialEval e = eval_partial(h, at);
      maps.push_back({{"map", map_json(h)}, {"output", e.output}, {"inside", e.inside}});
    }
    nlohmann::json hints;
    if (to_move(play.size()) == Player::adam) hints = {{"adam", {at.child(0), at.child(1)}}};
    return {{"xi", at},           {"maps", maps},   {"g", g.determined(at)},
            {"oracle", g.name}, {"hints", hints}, {"status", to_json_value(pc_payoff_status(play, domain, g))}};
  }
};

struct UnfoldedDriver {
  LabeledTree tree;
  IdealOracle oracle{IdealKind::null_closed};
  std::vector<TreeAutomaton> covers;
  Player human = Player::eve;
  Responder<UnfoldedMove> machine_player;
  std::vector<UnfoldedMove> play;

  using Move = UnfoldedMove;

  static UnfoldedDriver create(const nlohmann::json& params, Player human) {
    UnfoldedDriver d;
    if (!params.contains("tree")) throw BadParams("G_unfolded needs a tree");
    d.tree = labeled_tree_param(params.at("tree"));
    d.oracle = IdealOracle::parse(params.value("ideal", std::string("E")));
    d.covers = automata_param(params, "covers");
    d.human = human;
    if (human == Player::eve) {
      try {
        d.machine_player = unfolded_adam_synthesize(d.tree, d.oracle);
      } catch (const NotPositive& e) {
        throw BadParams(e.what());
      }
    } else {
      d.machine_player = unfolded_eve_counterplay(d.tree, d.oracle, d.covers);
    }
    return d;
  }
  CheckResult check(const Move& m) const {
    return validate_unfolded_move(round_of(play.size()), play, m, tree, oracle);
  }
  Move machine() const { return machine_player(play); }

  nlohmann::json view() const {
    LabeledWord tau = unfolded_game::last_node(play);
    nlohmann::json clopens = nlohmann::json::array();
    auto os = unfolded_game::eve_moves(play);
    for (std::size_t m = 0; m < os.size(); ++m) {
      auto v = clopen_view(os[m]);
      auto [i, k] = PairingFunction::rho(m);
      v["round"] = m + 1;
      v["pair"] = {i, k};
      clopens.push_back(v);
    }
    nlohmann::json hints;
    if (to_move(play.size()) == Player::adam) {
      nlohmann::json next = nlohmann::json::array();
      int s = tree.run(tau);
      for (const auto& l : tree.letters())
        if (tree.next(s, l) != LabeledTree::none) {
          LabeledWord w = tau;
          w.push_back(l);
          next.push_back(w);
        }
      hints = {{"adam", next}};
    } else {
      TreeAutomaton p = proj_below(tree, tau);
      hints = {{"positive", oracle.positive(p)}, {"eve", unfolded_eve_menu(play, tree, oracle)}};
    }
    return {{"tau", tau},
            {"ideal", oracle.name()},
            {"clopens", clopens},
            {"columns", columns_json(column_status(play))},
            {"hints", hints}};
  }
};

}  // namespace detail

/// One live game. Not thread-safe on its own; SessionManager serializes
/// access.
class Session {
 public:
  Session(std::string id, GameKind kind, nlohmann::json params, Player human)
      : id_(std::move(id)), kind_(kind), params_(std::move(params)), human_(human) {
    try {
      switch (kind_) {
        case GameKind::g_e: driver_ = detail::NullDriver::create(params_, human_); break;
        case GameKind::g_pc: driver_ = detail::PcDriver::create(params_, human_); break;
        case GameKind::g_unfolded: driver_ = detail::UnfoldedDriver::create(params_, human_); break;
      }
    } catch (const BadParams&) {
      throw;
    } catch (const Error& e) {
      throw BadParams(e.what());
    } catch (const nlohmann::json::exception& e) {
      throw BadParams(std::string("bad parameters: ") + e.what());
    }
    advance();
  }

  const std::string& id() const noexcept { return id_; }
  GameKind kind() const noexcept { return kind_; }
  Player human() const noexcept { return human_; }
  std::size_t length() const {
    return std::visit([](const auto& d) { return d.play.size(); }, driver_);
  }

  /// Applies the human move, then the machine reply. `round` (when given)
  /// must name the current round, guarding against replays of stale moves.
  void move(const nlohmann::json& move, std::optional<std::size_t> round = std::nullopt) {
    std::size_t len = length();
    if (to_move(len) != human_) throw NotYourTurn("it is " + to_string(to_move(len)) + "'s turn");
    if (round && *round != round_of(len))
      throw NotYourTurn("move for round " + std::to_string(*round) + " but the game is at round " +
                        std::to_string(round_of(len)));
    std::visit(
        [&](auto& d) {
          using Move = typename std::decay_t<decltype(d)>::Move;
          Move m;
          try {
            m = move.get<Move>();
          } catch (const nlohmann::json::exception& e) {
            throw IllegalMove(human_, round_of(len), {"type", e.what()});
          } catch (const ParseError& e) {
            throw IllegalMove(human_, round_of(len), {"type", e.what()});
          }
          if (auto v = d.check(m)) throw IllegalMove(human_, round_of(len), *v);
          d.play.push_back(std::move(m));
        },
        driver_);
    advance();
  }

  nlohmann::json state() const {
    return std::visit(
        [&](const auto& d) {
          nlohmann::json j = d.view();
          j["id"] = id_;
          j["kind"] = to_string(kind_);
          j["human"] = to_string(human_);
          j["round"] = round_of(d.play.size());
          j["turn"] = to_string(to_move(d.play.size()));
          j["history"] = trace_json(d.play);
          return j;
        },
        driver_);
  }

  std::string trace_jsonl() const {
    return std::visit([](const auto& d) { return fusion::trace_jsonl(d.play); }, driver_);
  }

  /// Re-runs a trace: the human's moves are replayed through the rule
  /// checks, the machine's must come out identical.
  static Session replay(std::string id, GameKind kind, const nlohmann::json& params, Player human,
                        const std::string& trace) {
    Session s(std::move(id), kind, params, human);
    std::size_t line = 0;
    for (const auto& j : parse_lines(trace)) {
      ++line;
      std::size_t len = s.length();
      if (line <= len) {
        if (s.move_json(line - 1) != j.at("move"))
          throw BadParams("replay diverges at trace line " + std::to_string(line));
        continue;
      }
      if (to_move(len) != human) throw BadParams("trace line " + std::to_string(line) + " is not a human move");
      s.move(j.at("move"));
    }
    return s;
  }

  const nlohmann::json& params() const noexcept { return params_; }

 private:
  static std::vector<nlohmann::json> parse_lines(const std::string& text) {
    std::vector<nlohmann::json> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(pos, end - pos);
      pos = end + 1;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      try {
        out.push_back(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw ParseError("trace line " + std::to_string(out.size() + 1) + ": " + e.what());
      }
    }
    return out;
  }

  nlohmann::json move_json(std::size_t i) const {
    return std::visit([&](const auto& d) { return nlohmann::json(d.play.at(i)); }, driver_);
  }

  // The machine moves until it is the human's turn again.
  void advance() {
    std::visit(
        [&](auto& d) {
          while (to_move(d.play.size()) != human_) {
            auto m = d.machine();
            if (auto v = d.check(m)) throw IllegalMove(to_move(d.play.size()), round_of(d.play.size()), *v);
            d.play.push_back(std::move(m));
          }
        },
        driver_);
  }

  std::string id_;
  GameKind kind_;
  nlohmann::json params_;
  Player human_;
  std::variant<detail::NullDriver, detail::PcDriver, detail::UnfoldedDriver> driver_;
};

/// Sessions keyed by id, ids issued in creation order.
class SessionManager {
 public:
  explicit SessionManager(std::string prefix = "s") : prefix_(std::move(prefix)) {}

  nlohmann::json create(const nlohmann::json& request) {
    GameKind kind = parse_game_kind(request.value("kind", std::string()));
    Player human = parse_player(request.value("human", std::string("Adam")));
    nlohmann::json params = request.value("params", nlohmann::json::object());
    std::string id;
    {
      std::lock_guard lock(mutex_);
      id = prefix_ + std::to_string(++counter_);
    }
    auto entry = std::make_shared<Entry>(Session(id, kind, params, human));
    std::lock_guard lock(mutex_);
    sessions_.emplace(id, entry);
    return {{"id", id}, {"state", entry->session.state()}};
  }

  nlohmann::json state(const std::string& id) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    return e->session.state();
  }

  nlohmann::json move(const std::string& id, const nlohmann::json& request) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    std::optional<std::size_t> round;
    if (request.contains("round")) round = request.at("round").get<std::size_t>();
    if (!request.contains("move")) throw BadParams("request has no \"move\"");
    e->session.move(request.at("move"), round);
    return e->session.state();
  }

  std::string trace(const std::string& id) {
    auto e = find(id);
    std::lock_guard lock(e->mutex);
    return e->session.trace_jsonl();
  }

 private:
  struct Entry {
    explicit Entry(Session s) : session(std::move(s)) {}
    std::mutex mutex;
    Session session;
  };

  std::shared_ptr<Entry> find(const std::string& id) {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw UnknownSession("no session \"" + id + "\"");
    return it->second;
  }

  std::string prefix_;
  std::mutex mutex_;
  std::size_t counter_ = 0;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
};

/// {code, clause, detail} for an error; the HTTP status is 404 for unknown
/// sessions and 400 otherwise.
inline std::pair<int, nlohmann::json> error_response(const std::exception& e) {
  if (const auto* im = dynamic_cast<const IllegalMove*>(&e))
    return {400, {{"code", im->code()}, {"clause", im->violation().clause}, {"detail", im->what()}}};
  if (const auto* fe = dynamic_cast<const Error*>(&e))
    return {dynamic_cast<const UnknownSession*>(&e) ? 404 : 400,
            {{"code", fe->code()}, {"clause", ""}, {"detail", fe->what()}}};
  if (dynamic_cast<const nlohmann::json::exception*>(&e))
    return {400, {{"code", "ParseError"}, {"clause", ""}, {"detail", e.what()}}};
  return {500, {{"code", "Internal"}, {"clause", ""}, {"detail", e.what()}}};
}

}  // namespace fusion
