#pragma once

// The piecewise-continuity game. Round n: Adam extends ξ_n ∈ 2^n, Eve answers
// with a finite list of monotone maps H^n_i of height n, each end-extending
// her previous H^{n−1}_i. Eve wins when x lies outside B, or in the domain of
// some limit map h_i with g(x) = h_i(x).

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/automaton.hpp"
#include "fusion/cantor.hpp"
#include "fusion/game.hpp"

namespace fusion {

/// A finite tree of nodes (prefix-closed) with a monotone image word per
/// node. The empty map codes the empty function.
using MonotoneMap = std::map<Word, Word>;

inline bool is_terminal(const MonotoneMap& m, const Word& node) {
  return !m.count(node.child(0)) && !m.count(node.child(1));
}

/// Prefix-closed, monotone, and of height `height`: every terminal node's
/// image has length height and no image is longer.
inline CheckResult monotone_validate(const MonotoneMap& m, std::size_t height) {
  for (const auto& [node, image] : m) {
    if (!node.empty()) {
      Word parent = node.prefix(node.size() - 1);
      auto it = m.find(parent);
      if (it == m.end()) return Violation{"tree", "node \"" + node.str() + "\" has no parent node"};
      if (!it->second.is_prefix_of(image))
        return Violation{"monotone", "image of \"" + node.str() + "\" (\"" + image.str() +
                                         "\") does not extend the image of its parent (\"" + it->second.str() + "\")"};
    }
    if (image.size() > height)
      return Violation{"height", "image of \"" + node.str() + "\" is longer than " + std::to_string(height)};
    if (is_terminal(m, node) && image.size() != height)
      return Violation{"height", "terminal node \"" + node.str() + "\" has image of length " +
                                     std::to_string(image.size()) + ", expected " + std::to_string(height)};
  }
  return std::nullopt;
}

struct PartialEval {
  Word output;
  bool inside = false;  // false: x has left the node tree

  friend bool operator==(const PartialEval&, const PartialEval&) = default;
};

/// Image of the deepest node on x, or "outside" when x leaves the tree below
/// a non-terminal node.
inline PartialEval eval_partial(const MonotoneMap& m, const Word& x) {
  auto root = m.find(Word());
  if (root == m.end()) return {Word(), false};
  Word out = root->second;
  for (std::size_t i = 1; i <= x.size(); ++i) {
    Word p = x.prefix(i - 1);
    auto it = m.find(x.prefix(i));
    if (it == m.end()) {
      if (is_terminal(m, p)) return {out, true};
      return {out, false};
    }
    out = it->second;
  }
  return {out, true};
}

/// `next` end-extends `prev`: same images on prev's nodes, new nodes only
/// below terminal nodes of prev. The empty map is extended by anything.
inline CheckResult end_extends(const MonotoneMap& next, const MonotoneMap& prev) {
  if (prev.empty()) return std::nullopt;
  for (const auto& [node, image] : prev) {
    auto it = next.find(node);
    if (it == next.end()) return Violation{"extension", "node \"" + node.str() + "\" was dropped"};
    if (it->second != image)
      return Violation{"extension", "image of \"" + node.str() + "\" changed from \"" + image.str() + "\" to \"" +
                                        it->second.str() + "\""};
  }
  for (const auto& [node, image] : next) {
    if (node.empty() || prev.count(node)) continue;
    Word parent = node.prefix(node.size() - 1);
    if (prev.count(parent) && !is_terminal(prev, parent))
      return Violation{"extension", "new node \"" + node.str() + "\" branches off the non-terminal node \"" +
                                        parent.str() + "\""};
  }
  return std::nullopt;
}

/// Nodes comparable with w.
inline MonotoneMap restrict_map(const MonotoneMap& m, const Word& w) {
  MonotoneMap out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    auto it = m.find(w.prefix(i));
    if (it != m.end()) out.insert(*it);
  }
  for (auto it = m.lower_bound(w); it != m.end() && w.is_prefix_of(it->first); ++it) out.insert(*it);
  return out;
}

/// A continuous partial function with closed regular domain, as a
/// transducer: each edge of the domain automaton emits at most one bit, and
/// every cycle emits something (so outputs grow without bound).
class MonotoneCode {
 public:
  static constexpr int none = TreeAutomaton::none;
  struct Edge {
    int to = none;
    std::string out;
  };
  using Edges = std::vector<std::array<Edge, 2>>;

  MonotoneCode() = default;
  /// Throws ParseError unless the code is well formed.
  MonotoneCode(int start, Edges edges) : start_(start), edges_(std::move(edges)) {
    if (auto v = check()) throw ParseError("monotone code [" + v->clause + "]: " + v->detail);
  }

  int start() const noexcept { return start_; }
  const Edges& edges() const noexcept { return edges_; }

  TreeAutomaton domain() const {
    TreeAutomaton::Transitions delta(edges_.size());
    for (std::size_t s = 0; s < edges_.size(); ++s)
      for (int b = 0; b < 2; ++b) delta[s][b] = edges_[s][b].to;
    return TreeAutomaton(start_, std::move(delta));
  }

  /// Height-n truncation: the nodes all of whose proper prefixes have
  /// output shorter than n.
  MonotoneMap truncate(std::size_t n) const {
    MonotoneMap out;
    std::vector<std::tuple<Word, Word, int>> stack{{Word(), Word(), start_}};
    while (!stack.empty()) {
      auto [node, image, s] = stack.back();
      stack.pop_back();
      out.emplace(node, image);
      if (image.size() >= n) continue;
      for (int b = 0; b < 2; ++b) {
        const Edge& e = edges_[s][b];
        if (e.to != none) stack.emplace_back(node.child(b), image.concat(Word(e.out)), e.to);
      }
    }
    return out;
  }

  /// Output along x; nullopt when x leaves the domain.
  std::optional<Word> eval(const Word& x) const {
    int s = start_;
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Edge& e = edges_[s][x.bit(i)];
      if (e.to == none) return std::nullopt;
      out += e.out;
      s = e.to;
    }
    return Word(out);
  }

  /// The same function restricted to [w] (domain ∩ [w]).
  MonotoneCode below(const Word& w) const {
    Edges edges = edges_;
    int offset = static_cast<int>(edges.size());
    int s = start_;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const Edge& e = edges_[s][w.bit(i)];
      if (e.to == none) throw EmptyTree("restriction of a monotone code to an empty cylinder");
      std::array<Edge, 2> row;
      int to = i + 1 == w.size() ? e.to : offset + static_cast<int>(i) + 1;
      row[w.bit(i)] = {to, e.out};
      edges.push_back(row);
      s = e.to;
    }
    return MonotoneCode(w.empty() ? start_ : offset, std::move(edges));
  }

  // fixtures
  static MonotoneCode identity() { return MonotoneCode(0, {{Edge{0, "0"}, Edge{0, "1"}}}); }
  static MonotoneCode flip() { return MonotoneCode(0, {{Edge{0, "1"}, Edge{0, "0"}}}); }
  static MonotoneCode constant(int bit) {
    std::string b = bit ? "1" : "0";
    return MonotoneCode(0, {{Edge{0, b}, Edge{0, b}}});
  }
  /// Drops the first bit.
  static MonotoneCode shift() {
    return MonotoneCode(0, {{Edge{1, ""}, Edge{1, ""}}, {Edge{1, "0"}, Edge{1, "1"}}});
  }
  /// Identity on the closed set of a tree automaton.
  static MonotoneCode identity_on(const TreeAutomaton& t) {
    if (t.empty()) throw EmptyTree("identity_on: empty domain");
    Edges edges(t.size());
    for (int s = 0; s < t.size(); ++s)
      for (int b = 0; b < 2; ++b)
        if (t.next(s, b) != none) edges[s][b] = {t.next(s, b), b ? "1" : "0"};
    return MonotoneCode(t.start(), std::move(edges));
  }

  static std::optional<MonotoneCode> by_name(const std::string& name) {
    if (name == "identity") return identity();
    if (name == "flip") return flip();
    if (name == "zero") return constant(0);
    if (name == "one") return constant(1);
    if (name == "shift") return shift();
    return std::nullopt;
  }

 private:
  CheckResult check() const {
    const int n = static_cast<int>(edges_.size());
    if (start_ < 0 || start_ >= n) return Violation{"start", "start state out of range"};
    for (int s = 0; s < n; ++s) {
      bool any = false;
      for (int b = 0; b < 2; ++b) {
        const Edge& e = edges_[s][b];
        if (e.to == none) continue;
        any = true;
        if (e.to < 0 || e.to >= n) return Violation{"edge", "target out of range at state " + std::to_string(s)};
        if (e.out.size() > 1 || (e.out.size() == 1 && e.out[0] != '0' && e.out[0] != '1'))
          return Violation{"output", "edge output must be \"\", \"0\" or \"1\" at state " + std::to_string(s)};
      }
      if (!any) return Violation{"pruned", "state " + std::to_string(s) + " has no outgoing edge"};
    }
    // silent edges must not close a cycle
    std::vector<int> color(n, 0);
    std::function<bool(int)> cyclic = [&](int s) {
      color[s] = 1;
      for (int b = 0; b < 2; ++b) {
        const Edge& e = edges_[s][b];
        if (e.to == none || !e.out.empty()) continue;
        if (color[e.to] == 1 || (color[e.to] == 0 && cyclic(e.to))) return true;
      }
      color[s] = 2;
      return false;
    };
    for (int s = 0; s < n; ++s)
      if (color[s] == 0 && cyclic(s)) return Violation{"productive", "a cycle of silent edges passes state " + std::to_string(s)};
    return std::nullopt;
  }

  int start_ = 0;
  Edges edges_;
};

inline void to_json(nlohmann::json& j, const MonotoneCode& c) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::size_t s = 0; s < c.edges().size(); ++s)
    for (int b = 0; b < 2; ++b)
      if (c.edges()[s][b].to != MonotoneCode::none) edges.push_back({s, b, c.edges()[s][b].to, c.edges()[s][b].out});
  j = {{"states", c.edges().size()}, {"start", c.start()}, {"edges", edges}};
}

/// {"fixture": name, "below": word} or {"states", "start", "edges": [[s, b, t, out]]}.
inline void from_json(const nlohmann::json& j, MonotoneCode& c) {
  try {
    if (j.contains("fixture")) {
      auto f = MonotoneCode::by_name(j.at("fixture").get<std::string>());
      if (!f) throw ParseError("unknown monotone code fixture " + j.at("fixture").dump());
      c = j.contains("below") ? f->below(j.at("below").get<Word>()) : *f;
      return;
    }
    MonotoneCode::Edges edges(j.at("states").get<std::size_t>());
    for (const auto& e : j.at("edges")) {
      std::size_t s = e.at(0).get<std::size_t>();
      int b = e.at(1).get<int>();
      if (s >= edges.size() || (b != 0 && b != 1)) throw ParseError("monotone code edge out of range: " + e.dump());
      edges[s][b] = {e.at(2).get<int>(), e.size() > 3 ? e.at(3).get<std::string>() : std::string()};
    }
    c = MonotoneCode(j.at("start").get<int>(), std::move(edges));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("monotone code JSON: ") + e.what());
  }
}

inline nlohmann::json map_json(const MonotoneMap& m) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [node, image] : m) j.push_back({{"node", node.str()}, {"image", image.str()}});
  return j;
}

inline MonotoneMap parse_map_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("monotone map must be a JSON array of {node, image}");
  MonotoneMap m;
  try {
    for (const auto& e : j) m[e.at("node").get<Word>()] = e.at("image").get<Word>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("monotone map JSON: ") + e.what());
  }
  return m;
}

using PcMove = std::variant<Word, std::vector<MonotoneMap>>;

}  // namespace fusion

template <>
struct nlohmann::adl_serializer<fusion::PcMove> {
  static void to_json(json& j, const fusion::PcMove& m) {
    if (const auto* w = std::get_if<fusion::Word>(&m)) {
      j = w->str();
      return;
    }
    j = json::array();
    for (const auto& h : std::get<1>(m)) j.push_back(fusion::map_json(h));
  }
  static void from_json(const json& j, fusion::PcMove& m) {
    if (j.is_string()) {
      m = j.get<fusion::Word>();
      return;
    }
    if (!j.is_array()) throw fusion::ParseError("G_pc move must be a word or an array of monotone maps");
    std::vector<fusion::MonotoneMap> hs;
    for (const auto& e : j) hs.push_back(fusion::parse_map_json(e));
    m = std::move(hs);
  }
};

namespace fusion {

namespace pc_game {

inline Word last_word(std::span<const PcMove> play) {
  for (std::size_t i = play.size(); i-- > 0;)
    if (const auto* w = std::get_if<Word>(&play[i])) return *w;
  return Word();
}

inline std::vector<MonotoneMap> last_maps(std::span<const PcMove> play) {
  for (std::size_t i = play.size(); i-- > 0;)
    if (const auto* h = std::get_if<std::vector<MonotoneMap>>(&play[i])) return *h;
  return {};
}

}  // namespace pc_game

/// Eve's round-n rules: each map has height n, and end-extends the map of
/// the same index from round n−1. Cofinitely many maps are empty because
/// the list is finite.
inline CheckResult validate_pc_eve_move(std::size_t n, const std::vector<MonotoneMap>& prev,
                                        const std::vector<MonotoneMap>& next) {
  static const MonotoneMap nothing;
  for (std::size_t i = 0; i < std::max(prev.size(), next.size()); ++i) {
    const MonotoneMap& p = i < prev.size() ? prev[i] : nothing;
    const MonotoneMap& h = i < next.size() ? next[i] : nothing;
    if (!h.empty())
      if (auto v = monotone_validate(h, n)) return Violation{v->clause, "H_" + std::to_string(i) + ": " + v->detail};
    if (auto v = end_extends(h, p)) return Violation{v->clause, "H_" + std::to_string(i) + ": " + v->detail};
  }
  return std::nullopt;
}

inline CheckResult validate_pc_move(std::size_t n, std::span<const PcMove> prev, const PcMove& move) {
  if (n == 0) return Violation{"round", "rounds start at 1"};
  if (to_move(prev.size()) == Player::adam) {
    const auto* xi = std::get_if<Word>(&move);
    if (!xi) return Violation{"type", "Adam must play a word"};
    if (xi->size() != n)
      return Violation{"length", "ξ_" + std::to_string(n) + " must have length " + std::to_string(n)};
    Word before = pc_game::last_word(prev);
    if (!before.is_prefix_of(*xi))
      return Violation{"extension", "\"" + xi->str() + "\" does not extend \"" + before.str() + "\""};
    return std::nullopt;
  }
  const auto* hs = std::get_if<std::vector<MonotoneMap>>(&move);
  if (!hs) return Violation{"type", "Eve must play a list of monotone maps"};
  return validate_pc_eve_move(n, pc_game::last_maps(prev), *hs);
}

inline GameScheme<PcMove> pc_game_scheme() {
  return {[](std::span<const PcMove> prev, const PcMove& m) { return validate_pc_move(round_of(prev.size()), prev, m); },
          {}};
}

/// Eve rewrites the codes: at round n she plays the height-n truncation of
/// every entry.
inline Responder<PcMove> pc_eve_synthesize(const std::vector<MonotoneCode>& decomposition) {
  auto cache = std::make_shared<std::map<std::size_t, std::vector<MonotoneMap>>>();
  return [decomposition, cache](std::span<const PcMove> play) -> PcMove {
    std::size_t n = round_of(play.size());
    auto it = cache->find(n);
    if (it == cache->end()) {
      std::vector<MonotoneMap> hs;
      for (const auto& c : decomposition) hs.push_back(c.truncate(n));
      it = cache->emplace(n, std::move(hs)).first;
    }
    return it->second;
  };
}

/// G_k = ⋃ over Adam's nodes σ ∈ 2^depth of Eve's final k-th map restricted
/// below σ. Conflicting images raise IncompatibleUnion; trailing empty
/// entries are dropped.
inline std::vector<MonotoneMap> cover_extract(const Responder<PcMove>& eve, std::size_t depth) {
  std::vector<MonotoneMap> out;
  std::vector<PcMove> play;
  std::function<void(const Word&)> walk = [&](const Word& at) {
    std::size_t n = at.size();
    if (n == depth) {
      auto hs = pc_game::last_maps(play);
      if (out.size() < hs.size()) out.resize(hs.size());
      for (std::size_t k = 0; k < hs.size(); ++k)
        for (const auto& [node, image] : restrict_map(hs[k], at)) {
          auto [it, inserted] = out[k].emplace(node, image);
          if (!inserted && it->second != image)
            throw IncompatibleUnion("entry " + std::to_string(k) + ", node \"" + node.str() + "\": images \"" +
                                    it->second.str() + "\" and \"" + image.str() + "\"");
        }
      return;
    }
    for (int b = 0; b < 2; ++b) {
      Word xi = at.child(b);
      play.emplace_back(xi);
      PcMove h = eve(play);
      if (auto v = validate_pc_move(n + 1, play, h))
        throw IllegalStrategy("Eve at round " + std::to_string(n + 1) + " after \"" + xi.str() + "\" [" + v->clause +
                              "]: " + v->detail);
      play.push_back(std::move(h));
      walk(xi);
      play.pop_back();
      play.pop_back();
    }
  };
  walk(Word());
  while (!out.empty() && out.back().empty()) out.pop_back();
  return out;
}

/// A total function on Cantor space given by what finite prefixes determine.
struct FunctionOracle {
  std::string name;
  std::function<Word(const Word&)> determined;
  std::function<EventuallyPeriodicPoint(const EventuallyPeriodicPoint&)> point;
};

/// g(x) = 1^(number of ones in x) 0^ω, or 1^ω.
inline FunctionOracle count_ones_oracle() {
  auto ones = [](const Word& w) {
    return static_cast<std::size_t>(std::count(w.str().begin(), w.str().end(), '1'));
  };
  return {"count-ones", [ones](const Word& x) { return Word::repeat(1, ones(x)); },
          [ones](const EventuallyPeriodicPoint& x) {
            if (ones(x.period) > 0) return EventuallyPeriodicPoint{Word(), Word("1")};
            return EventuallyPeriodicPoint{Word::repeat(1, ones(x.prefix)), Word("0")};
          }};
}

inline FunctionOracle identity_oracle() {
  return {"identity", [](const Word& x) { return x; }, [](const EventuallyPeriodicPoint& x) { return x; }};
}

enum class PcStatus { eve_cert_not_in_b, eve_agreeing, adam_pending };

inline std::string to_string(PcStatus s) {
  switch (s) {
    case PcStatus::eve_cert_not_in_b: return "EVE_CERT_NOT_IN_B";
    case PcStatus::eve_agreeing: return "EVE_AGREEING";
    case PcStatus::adam_pending: return "ADAM_PENDING";
  }
  return "?";
}

struct PcPayoff {
  PcStatus status = PcStatus::adam_pending;
  std::size_t index = 0;  // for eve_agreeing
  std::size_t depth = 0;

  friend bool operator==(const PcPayoff&, const PcPayoff&) = default;
};

/// Adam's word left B; or it is inside some h_i whose image is comparable
/// with g's determined output (the deepest agreement wins, ties to the
/// lowest index); or pending.
inline PcPayoff pc_payoff_status(std::span<const PcMove> play, const TreeAutomaton& b, const FunctionOracle& g) {
  Word xi = pc_game::last_word(play);
  if (!b.contains(xi)) return {PcStatus::eve_cert_not_in_b, 0, 0};
  Word gx = g.determined(xi);
  auto hs = pc_game::last_maps(play);
  std::optional<PcPayoff> best;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    PartialEval e = eval_partial(hs[i], xi);
    if (!e.inside || !e.output.comparable(gx)) continue;
    std::size_t d = std::min(e.output.size(), gx.size());
    if (!best || d > best->depth) best = PcPayoff{PcStatus::eve_agreeing, i, d};
  }
  return best.value_or(PcPayoff{});
}

inline nlohmann::json to_json_value(const PcPayoff& p) {
  nlohmann::json j{{"status", to_string(p.status)}};
  if (p.status == PcStatus::eve_agreeing) {
    j["index"] = p.index;
    j["depth"] = p.depth;
  }
  return j;
}

// Baire space inside 2^ω: (n₀, n₁, …) ↦ 0^n₀ 1 0^n₁ 1 …, onto the points
// with infinitely many ones.

struct BaireTuplePrefix {
  std::vector<std::size_t> blocks;
  std::size_t partial = 0;  // zeros of an unfinished trailing block

  friend bool operator==(const BaireTuplePrefix&, const BaireTuplePrefix&) = default;
};

inline Word baire_embed(const BaireTuplePrefix& t) {
  std::string s;
  for (std::size_t n : t.blocks) s += std::string(n, '0') + "1";
  s += std::string(t.partial, '0');
  return Word(s);
}

/// Inverse of baire_embed on words.
inline BaireTuplePrefix baire_decode(const Word& w) {
  BaireTuplePrefix t;
  for (char c : w.str()) {
    if (c == '1') {
      t.blocks.push_back(t.partial);
      t.partial = 0;
    } else {
      ++t.partial;
    }
  }
  return t;
}

/// Constraint on leading tuple entries: the listed entries are fixed and
/// the next one is at least `next_at_least`.
struct TupleCylinder {
  std::vector<std::size_t> fixed;
  std::size_t next_at_least = 0;

  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < fixed.size(); ++i)
      s += (i ? ", n" : "n") + std::to_string(i) + " = " + std::to_string(fixed[i]);
    if (next_at_least > 0)
      s += (fixed.empty() ? "n" : ", n") + std::to_string(fixed.size()) + " ≥ " + std::to_string(next_at_least);
    return s + "}";
  }

  friend bool operator==(const TupleCylinder&, const TupleCylinder&) = default;
};

/// Preimage of a clopen set: one tuple cylinder per generator.
inline std::vector<TupleCylinder> baire_preimage(const ClopenSet& u) {
  std::vector<TupleCylinder> out;
  for (const auto& w : u.generators()) {
    BaireTuplePrefix t = baire_decode(w);
    out.push_back({t.blocks, t.partial});
  }
  return out;
}

inline void to_json(nlohmann::json& j, const TupleCylinder& c) {
  j = {{"fixed", c.fixed}, {"next_at_least", c.next_at_least}, {"text", c.str()}};
}

/// Points whose blocks all have at most `bound` zeros: a compact set of
/// points with infinitely many ones.
inline TreeAutomaton bounded_baire_automaton(std::size_t bound) {
  TreeAutomaton::Transitions delta(bound + 1);
  for (std::size_t j = 0; j <= bound; ++j) {
    delta[j][0] = j < bound ? static_cast<int>(j) + 1 : TreeAutomaton::none;
    delta[j][1] = 0;
  }
  return TreeAutomaton(0, std::move(delta));
}

struct CompactnessReport {
  bool pruned = true;                   // every node of length < depth extends
  bool ones_in_every_window = true;     // window length max bound + 1
  bool finitely_branching = true;       // decoded nodes have ≤ bound(i) + 1 children
  std::size_t nodes = 0;                // words of length depth
  std::size_t max_branching = 0;

  bool ok() const { return pruned && ones_in_every_window && finitely_branching; }
};

/// Checks, on the depth truncation, that {b(n₀, n₁, …) : nᵢ ≤ bound(i)} is a
/// compact set avoiding the eventually-zero points: its tree is pruned, its
/// words have a 1 in every long window, and its block-decoded tree branches
/// finitely.
inline CompactnessReport ksigma_check(const std::function<std::size_t(std::size_t)>& bound, std::size_t depth) {
  CompactnessReport r;
  std::size_t widest = 0;
  for (std::size_t i = 0; i <= depth; ++i) widest = std::max(widest, bound(i));
  std::map<std::vector<std::size_t>, std::set<std::size_t>> children;
  auto allowed = [&](const Word& w) {
    BaireTuplePrefix t = baire_decode(w);
    for (std::size_t i = 0; i < t.blocks.size(); ++i)
      if (t.blocks[i] > bound(i)) return false;
    return t.partial <= bound(t.blocks.size());
  };
  std::vector<Word> level{Word()};
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<Word> next;
    for (const auto& w : level) {
      bool any = false;
      for (int b = 0; b < 2; ++b) {
        Word c = w.child(b);
        if (!allowed(c)) continue;
        any = true;
        next.push_back(c);
        if (b == 1) {
          BaireTuplePrefix t = baire_decode(c);
          std::size_t last = t.blocks.back();
          t.blocks.pop_back();
          children[t.blocks].insert(last);
        }
      }
      r.pruned = r.pruned && any;
    }
    level = std::move(next);
  }
  r.nodes = level.size();
  for (const auto& w : level) {
    const std::string& s = w.str();
    for (std::size_t i = 0; i + widest + 1 <= s.size(); ++i)
      if (s.find('1', i) >= i + widest + 1) r.ones_in_every_window = false;
  }
  for (const auto& [prefix, values] : children) {
    r.max_branching = std::max(r.max_branching, values.size());
    if (values.size() > bound(prefix.size()) + 1) r.finitely_branching = false;
  }
  return r;
}

}  // namespace fusion
