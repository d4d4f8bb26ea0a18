#pragma once

// The unfolded game on a tree of (digit, label) pairs. Round n: Adam
// extends his node τ_n strictly inside T; Eve plays a clopen O_n such that
// O_n ∩ proj[T(τ_n)] is positive whenever proj[T(τ_n)] is. Eve's moves are
// split into columns by a pairing ρ, column k closing to
// E_k = 2^ω ∖ ⋃{O_m : ρ(m) = (i, k)}; Adam wins when x avoids every E_k.

#include <array>
#include <compare>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/automaton.hpp"
#include "fusion/game.hpp"
#include "fusion/ideal.hpp"

namespace fusion {

struct Letter {
  int bit = 0;
  int label = 0;

  friend auto operator<=>(const Letter&, const Letter&) = default;
  friend bool operator==(const Letter&, const Letter&) = default;
};

using LabeledWord = std::vector<Letter>;

/// First coordinates.
inline Word digits(const LabeledWord& w) {
  std::string s;
  for (const auto& l : w) s.push_back(l.bit ? '1' : '0');
  return Word(s);
}

inline bool is_prefix(const LabeledWord& a, const LabeledWord& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

/// Pruned deterministic automaton over {0,1} × labels.
class LabeledTree {
 public:
  static constexpr int none = TreeAutomaton::none;
  using Transitions = std::vector<std::vector<int>>;  // [state][bit · labels + label]

  LabeledTree() = default;
  LabeledTree(std::vector<std::string> labels, int start, Transitions delta) : labels_(std::move(labels)) {
    if (labels_.empty()) throw ParseError("labeled tree needs at least one label");
    for (const auto& row : delta)
      if (row.size() != 2 * labels_.size()) throw ParseError("labeled tree row has the wrong width");
    prune(start, std::move(delta));
  }

  /// The tree of an automaton with one constant label.
  static LabeledTree constant(const TreeAutomaton& t, const std::string& label = "a") {
    Transitions delta;
    for (const auto& row : t.transitions()) delta.push_back({row[0], row[1]});
    return t.empty() ? LabeledTree({label}, 0, {}) : LabeledTree({label}, t.start(), std::move(delta));
  }

  bool empty() const noexcept { return delta_.empty(); }
  int size() const noexcept { return static_cast<int>(delta_.size()); }
  int start() const noexcept { return empty() ? none : 0; }
  int label_count() const noexcept { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const Transitions& transitions() const noexcept { return delta_; }

  int next(int s, const Letter& l) const {
    if (s == none || l.bit < 0 || l.bit > 1 || l.label < 0 || l.label >= label_count()) return none;
    return delta_[s][l.bit * label_count() + l.label];
  }
  int run(const LabeledWord& w, int from) const {
    for (const auto& l : w) {
      if (from == none) return none;
      from = next(from, l);
    }
    return from;
  }
  int run(const LabeledWord& w) const { return empty() ? none : run(w, 0); }
  bool contains(const LabeledWord& w) const { return run(w) != none; }

  LabeledTree residual(int s) const {
    LabeledTree t;
    t.labels_ = labels_;
    t.prune(s, delta_);
    return t;
  }

  /// All letters in (bit, label) order.
  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    for (int b = 0; b < 2; ++b)
      for (int l = 0; l < label_count(); ++l) out.push_back({b, l});
    return out;
  }

  friend bool operator==(const LabeledTree&, const LabeledTree&) = default;

 private:
  void prune(int start, Transitions delta) {
    const int n = static_cast<int>(delta.size());
    delta_.clear();
    if (start < 0 || start >= n) return;
    std::vector<char> live(n, 1);
    for (bool changed = true; changed;) {
      changed = false;
      for (int s = 0; s < n; ++s) {
        if (!live[s]) continue;
        bool any = false;
        for (int t : delta[s]) any = any || (t != none && t >= 0 && t < n && live[t]);
        if (!any) {
          live[s] = 0;
          changed = true;
        }
      }
    }
    if (!live[start]) return;
    std::vector<int> id(n, none), order{start};
    id[start] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
      for (int t : delta[order[i]])
        if (t != none && t >= 0 && t < n && live[t] && id[t] == none) {
          id[t] = static_cast<int>(order.size());
          order.push_back(t);
        }
    for (int s : order) {
      std::vector<int> row;
      for (int t : delta[s]) row.push_back(t != none && t >= 0 && t < n && live[t] ? id[t] : none);
      delta_.push_back(std::move(row));
    }
  }

  std::vector<std::string> labels_;
  Transitions delta_;
};

/// Label-erasing subset construction.
inline TreeAutomaton proj(const LabeledTree& t) {
  if (t.empty()) return {};
  std::map<std::set<int>, int> id;
  std::vector<std::set<int>> sets;
  TreeAutomaton::Transitions delta;
  auto get = [&](const std::set<int>& s) {
    auto [it, inserted] = id.emplace(s, static_cast<int>(sets.size()));
    if (inserted) {
      sets.push_back(s);
      delta.push_back({TreeAutomaton::none, TreeAutomaton::none});
    }
    return it->second;
  };
  get({t.start()});
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (int b = 0; b < 2; ++b) {
      std::set<int> to;
      for (int s : sets[i])
        for (int l = 0; l < t.label_count(); ++l)
          if (int n = t.next(s, {b, l}); n != LabeledTree::none) to.insert(n);
      if (!to.empty()) {
        int k = get(to);
        delta[i][b] = k;
      }
    }
  return TreeAutomaton(0, std::move(delta));
}

/// {w·x : x ∈ lim t}
inline TreeAutomaton prepend(const Word& w, const TreeAutomaton& t) {
  if (t.empty()) return {};
  const int n = static_cast<int>(w.size());
  TreeAutomaton::Transitions delta(n);
  for (int i = 0; i < n; ++i) {
    delta[i] = {TreeAutomaton::none, TreeAutomaton::none};
    delta[i][w.bit(i)] = i + 1 == n ? n : i + 1;
  }
  for (const auto& row : t.transitions()) {
    std::array<int, 2> r = row;
    for (int& x : r)
      if (x != TreeAutomaton::none) x += n;
    delta.push_back(r);
  }
  return TreeAutomaton(0, std::move(delta));
}

/// proj[T(τ)], as a closed set in absolute position.
inline TreeAutomaton proj_below(const LabeledTree& t, const LabeledWord& tau) {
  int s = t.run(tau);
  if (s == LabeledTree::none) return {};
  return prepend(digits(tau), proj(t.residual(s)));
}

// Text format: "states: N", "start: i", "labels: a b", then
// "edge: s bit t label: a" lines; '#' starts a comment.
inline LabeledTree parse_labeled_tree(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int states = -1, start = 0;
  std::vector<std::string> labels;
  std::vector<std::tuple<int, int, int, std::string>> edges;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    auto fail = [&](const std::string& why) {
      return ParseError("labeled tree line " + std::to_string(lineno) + ": " + why);
    };
    if (key == "states:") {
      if (!(ls >> states) || states < 0) throw fail("bad state count");
    } else if (key == "start:") {
      if (!(ls >> start)) throw fail("bad start");
    } else if (key == "labels:") {
      std::string l;
      while (ls >> l) labels.push_back(l);
    } else if (key == "edge:") {
      int s, b, t;
      std::string kw, label;
      if (!(ls >> s >> b >> t)) throw fail("expected 'edge: s bit t label: name'");
      if (ls >> kw) {
        if (kw != "label:" || !(ls >> label)) throw fail("expected 'label: name'");
      }
      edges.emplace_back(s, b, t, label);
    } else {
      throw fail("unknown key " + key);
    }
  }
  if (states < 0) throw ParseError("labeled tree: missing 'states:'");
  if (labels.empty()) labels.push_back("a");
  const int width = 2 * static_cast<int>(labels.size());
  LabeledTree::Transitions delta(states, std::vector<int>(width, LabeledTree::none));
  for (const auto& [s, b, t, label] : edges) {
    int l = 0;
    if (!label.empty()) {
      auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end()) throw ParseError("labeled tree: unknown label " + label);
      l = static_cast<int>(it - labels.begin());
    }
    if (s < 0 || s >= states || t < 0 || t >= states || (b != 0 && b != 1))
      throw ParseError("labeled tree: edge out of range");
    delta[s][b * (width / 2) + l] = t;
  }
  if (states == 0) return LabeledTree(labels, 0, {});
  return LabeledTree(labels, start, std::move(delta));
}

inline std::string format_labeled_tree(const LabeledTree& t) {
  std::string out = "states: " + std::to_string(t.size()) + "\nstart: 0\nlabels:";
  for (const auto& l : t.labels()) out += " " + l;
  out += "\n";
  for (int s = 0; s < t.size(); ++s)
    for (const auto& letter : t.letters())
      if (int n = t.next(s, letter); n != LabeledTree::none)
        out += "edge: " + std::to_string(s) + " " + std::to_string(letter.bit) + " " + std::to_string(n) +
               " label: " + t.labels()[letter.label] + "\n";
  return out;
}

/// The text format, or an automaton file read with a constant label.
inline LabeledTree parse_labeled_tree_any(const std::string& text) {
  if (text.find("labels:") != std::string::npos) return parse_labeled_tree(text);
  return LabeledTree::constant(parse_automaton_any(text));
}

inline void to_json(nlohmann::json& j, const LabeledWord& w) {
  std::vector<int> labels;
  for (const auto& l : w) labels.push_back(l.label);
  j = {{"digits", digits(w).str()}, {"labels", labels}};
}

inline void from_json(const nlohmann::json& j, LabeledWord& w) {
  try {
    Word d = j.at("digits").get<Word>();
    std::vector<int> labels = j.contains("labels") ? j.at("labels").get<std::vector<int>>()
                                                   : std::vector<int>(d.size(), 0);
    if (labels.size() != d.size()) throw ParseError("labeled word: digits and labels differ in length");
    w.clear();
    for (std::size_t i = 0; i < d.size(); ++i) w.push_back({d.bit(i), labels[i]});
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("labeled word JSON: ") + e.what());
  }
}

using UnfoldedMove = std::variant<LabeledWord, ClopenSet>;

}  // namespace fusion

template <>
struct nlohmann::adl_serializer<fusion::UnfoldedMove> {
  static void to_json(json& j, const fusion::UnfoldedMove& m) {
    std::visit([&](const auto& v) { j = v; }, m);
  }
  static void from_json(const json& j, fusion::UnfoldedMove& m) {
    if (j.is_object())
      m = j.get<fusion::LabeledWord>();
    else
      m = j.get<fusion::ClopenSet>();
  }
};

namespace fusion {

/// Cantor's diagonal enumeration of ω × ω.
struct PairingFunction {
  static std::pair<std::size_t, std::size_t> rho(std::size_t n) {
    std::size_t d = 0;
    while ((d + 1) * (d + 2) / 2 <= n) ++d;
    std::size_t k = n - d * (d + 1) / 2;
    return {d - k, k};
  }
  static std::size_t inverse(std::size_t i, std::size_t k) { return (i + k) * (i + k + 1) / 2 + k; }
};

namespace unfolded_game {

inline LabeledWord last_node(std::span<const UnfoldedMove> play) {
  for (std::size_t i = play.size(); i-- > 0;)
    if (const auto* w = std::get_if<LabeledWord>(&play[i])) return *w;
  return {};
}

/// Eve's moves O_0, O_1, … in order.
inline std::vector<ClopenSet> eve_moves(std::span<const UnfoldedMove> play) {
  std::vector<ClopenSet> out;
  for (std::size_t i = 1; i < play.size(); i += 2)
    if (const auto* c = std::get_if<ClopenSet>(&play[i])) out.push_back(*c);
  return out;
}

}  // namespace unfolded_game

inline CheckResult validate_unfolded_move(std::size_t n, std::span<const UnfoldedMove> prev,
                                          const UnfoldedMove& move, const LabeledTree& t,
                                          const IdealOracle& oracle) {
  if (n == 0) return Violation{"round", "rounds start at 1"};
  LabeledWord tau = unfolded_game::last_node(prev);
  if (to_move(prev.size()) == Player::adam) {
    const auto* next = std::get_if<LabeledWord>(&move);
    if (!next) return Violation{"type", "Adam must play a node of the tree"};
    if (!is_prefix(tau, *next) || next->size() == tau.size())
      return Violation{"extension", "τ_" + std::to_string(n) + " must strictly extend the previous node"};
    if (!t.contains(*next)) return Violation{"tree", "node \"" + digits(*next).str() + "\" is not in T"};
    return std::nullopt;
  }
  const auto* o = std::get_if<ClopenSet>(&move);
  if (!o) return Violation{"type", "Eve must play a clopen set"};
  TreeAutomaton p = proj_below(t, tau);
  if (oracle.positive(p) && oracle.member(combine(p, clopen_automaton(*o), SetOp::intersect)))
    return Violation{"positivity", "proj[T(τ_" + std::to_string(n) + ")] is " + oracle.name() +
                                       "-positive but its intersection with O_" + std::to_string(n) + " is not"};
  return std::nullopt;
}

/// A few clopen sets around Adam's cylinder, filtered to legal ones: the
/// opponent menu used when materializing Adam's strategies.
inline std::vector<ClopenSet> unfolded_eve_menu(std::span<const UnfoldedMove> prev, const LabeledTree& t,
                                                const IdealOracle& oracle, std::size_t limit = 3) {
  Word d = digits(unfolded_game::last_node(prev));
  std::vector<ClopenSet> candidates{ClopenSet::whole(), ClopenSet::cylinder(d.child(0)),
                                    ClopenSet::cylinder(d.child(1)),
                                    ClopenSet({d.child(0).child(1), d.child(1).child(0)}), ClopenSet()};
  std::vector<ClopenSet> out;
  for (auto& c : candidates) {
    if (out.size() >= limit) break;
    if (!validate_unfolded_move(round_of(prev.size()), prev, UnfoldedMove(c), t, oracle)) out.push_back(std::move(c));
  }
  return out;
}

inline GameScheme<UnfoldedMove> unfolded_scheme(const LabeledTree& t, const IdealOracle& oracle) {
  GameScheme<UnfoldedMove> g;
  g.check = [t, oracle](std::span<const UnfoldedMove> prev, const UnfoldedMove& m) {
    return validate_unfolded_move(round_of(prev.size()), prev, m, t, oracle);
  };
  g.moves = [t, oracle](std::span<const UnfoldedMove> prev) {
    std::vector<UnfoldedMove> out;
    if (to_move(prev.size()) == Player::adam) {
      LabeledWord tau = unfolded_game::last_node(prev);
      int s = t.run(tau);
      for (const auto& l : t.letters())
        if (t.next(s, l) != LabeledTree::none) {
          LabeledWord next = tau;
          next.push_back(l);
          out.emplace_back(std::move(next));
        }
    } else {
      for (auto& c : unfolded_eve_menu(prev, t, oracle)) out.emplace_back(std::move(c));
    }
    return out;
  };
  return g;
}

/// Positivity of proj[T(τ)] for every state of T.
inline std::vector<char> positive_states(const LabeledTree& t, const IdealOracle& oracle) {
  std::vector<char> out(t.size(), 0);
  for (int s = 0; s < t.size(); ++s) out[s] = oracle.positive(proj(t.residual(s)));
  return out;
}

/// The shortest-then-lexicographic strict extension τ of `from` with
/// [τ̄] ⊆ o (skipped when o is nullopt) and proj[T(τ)] positive.
inline std::optional<LabeledWord> positive_extension(const LabeledTree& t, const std::vector<char>& positive,
                                                     const LabeledWord& from, const std::optional<ClopenSet>& o) {
  int s0 = t.run(from);
  if (s0 == LabeledTree::none) return std::nullopt;
  TreeAutomaton oa = o ? clopen_automaton(*o) : clopen_automaton(ClopenSet::whole());
  if (oa.empty()) return std::nullopt;
  auto full = full_states(oa);
  Word d = digits(from);
  int o0 = oa.run(d);
  if (o0 == TreeAutomaton::none) return std::nullopt;
  std::map<std::pair<int, int>, LabeledWord> frontier{{{s0, o0}, from}};
  const std::size_t bound = static_cast<std::size_t>(t.size()) * (oa.size() + 1) + 1;
  for (std::size_t step = 0; step < bound && !frontier.empty(); ++step) {
    std::map<std::pair<int, int>, LabeledWord> next;
    for (const auto& [st, w] : frontier)
      for (const auto& l : t.letters()) {
        int ls = t.next(st.first, l);
        if (ls == LabeledTree::none || !positive[ls]) continue;
        int os = oa.next(st.second, l.bit);
        if (os == TreeAutomaton::none) continue;
        LabeledWord wl = w;
        wl.push_back(l);
        auto [it, inserted] = next.emplace(std::pair{ls, os}, wl);
        if (!inserted && wl < it->second) it->second = std::move(wl);
      }
    std::optional<LabeledWord> found;
    for (const auto& [st, w] : next)
      if (full[st.second] && (!found || w < *found)) found = w;
    if (found) return found;
    frontier = std::move(next);
  }
  return std::nullopt;
}

/// Adam keeps [τ̄_n] inside Eve's last clopen and proj[T(τ_n)] positive.
/// The first move has no clopen to respect. Throws NotPositive when proj[T]
/// is a member.
inline Responder<UnfoldedMove> unfolded_adam_synthesize(const LabeledTree& t, const IdealOracle& oracle) {
  if (oracle.member(proj(t)))
    throw NotPositive("adam_synthesize: proj[T] is an " + oracle.name() + " member");
  auto positive = positive_states(t, oracle);
  return [t, positive](std::span<const UnfoldedMove> play) -> UnfoldedMove {
    LabeledWord tau = unfolded_game::last_node(play);
    std::optional<ClopenSet> o;
    if (!play.empty()) o = std::get<ClopenSet>(play.back());
    auto next = positive_extension(t, positive, tau, o);
    if (!next) throw Stuck("adam_synthesize: no positive extension at round " + std::to_string(round_of(play.size())));
    return *next;
  };
}

/// Adam extends by the least letter, ignoring Eve.
inline Responder<UnfoldedMove> unfolded_lexmin_adam(const LabeledTree& t) {
  return [t](std::span<const UnfoldedMove> play) -> UnfoldedMove {
    LabeledWord tau = unfolded_game::last_node(play);
    int s = t.run(tau);
    for (const auto& l : t.letters())
      if (t.next(s, l) != LabeledTree::none) {
        tau.push_back(l);
        return tau;
      }
    throw Stuck("lexmin Adam: dead node");
  };
}

/// Eve plays ∅ throughout.
inline Responder<UnfoldedMove> unfolded_empty_eve() {
  return [](std::span<const UnfoldedMove>) -> UnfoldedMove { return ClopenSet(); };
}

/// U^m = ⋃{[v·b] : v ∈ T, |v| < m, v·b ∉ T}, increasing to the complement
/// of lim T.
inline ClopenSet exhaustion(const TreeAutomaton& cover, std::size_t m) {
  if (cover.empty()) return ClopenSet::whole();
  return clopen_complement(ClopenSet(level_words(cover, Word(), m)));
}

/// Eve's counterplay from closed covers E_k: her n-th move (from 0), with
/// ρ(n) = (i, k), is U^m_k for the least m ≥ n keeping the intersection
/// with proj[T(τ_n)] positive (m = n when that set is a member); the whole
/// space when there is no cover k. Throws NoSuchM past max_extra.
inline Responder<UnfoldedMove> unfolded_eve_counterplay(const LabeledTree& t, const IdealOracle& oracle,
                                                        const std::vector<TreeAutomaton>& covers,
                                                        std::size_t max_extra = 24) {
  return [t, oracle, covers, max_extra](std::span<const UnfoldedMove> play) -> UnfoldedMove {
    std::size_t n = play.size() / 2;
    auto [i, k] = PairingFunction::rho(n);
    (void)i;
    if (k >= covers.size()) return ClopenSet::whole();
    TreeAutomaton p = proj_below(t, unfolded_game::last_node(play));
    if (oracle.member(p)) return exhaustion(covers[k], n);
    for (std::size_t m = n; m <= n + max_extra; ++m) {
      ClopenSet u = exhaustion(covers[k], m);
      if (oracle.positive(combine(p, clopen_automaton(u), SetOp::intersect))) return u;
    }
    throw NoSuchM("no m in [" + std::to_string(n) + ", " + std::to_string(n + max_extra) + "] for column " +
                  std::to_string(k) + " at Eve's move " + std::to_string(n));
  };
}

struct ColumnState {
  ClopenSet seen;        // ⋃ O_m with ρ(m) in this column, so far
  bool escaped = false;  // Adam's cylinder lies inside one such O_m

  friend bool operator==(const ColumnState&, const ColumnState&) = default;
};

/// Columns 0 … (largest column seen).
inline std::vector<ColumnState> column_status(std::span<const UnfoldedMove> play) {
  Word d = digits(unfolded_game::last_node(play));
  auto os = unfolded_game::eve_moves(play);
  std::vector<ColumnState> out;
  for (std::size_t m = 0; m < os.size(); ++m) {
    std::size_t k = PairingFunction::rho(m).second;
    if (out.size() <= k) out.resize(k + 1);
    out[k].seen = clopen_union(out[k].seen, os[m]);
    out[k].escaped = out[k].escaped || os[m].contains_cylinder(d);
  }
  return out;
}

inline bool column_escaped(std::span<const UnfoldedMove> play, std::size_t k) {
  auto cols = column_status(play);
  return k < cols.size() && cols[k].escaped;
}

/// Minimal even nodes of Adam's strategy where column k has escaped.
inline Front<UnfoldedMove> extract_front_k(const StrategyTree<UnfoldedMove>& s, std::size_t k) {
  return extract_front<UnfoldedMove>(
      s, [k](std::span<const UnfoldedMove> p) { return column_escaped(p, k); },
      [](const Play<UnfoldedMove>& p) { return "Adam at \"" + digits(unfolded_game::last_node(p)).str() + "\""; });
}

inline nlohmann::json columns_json(const std::vector<ColumnState>& cols) {
  nlohmann::json j = nlohmann::json::array();
  for (std::size_t k = 0; k < cols.size(); ++k)
    j.push_back({{"column", k}, {"seen", cols[k].seen}, {"escaped", cols[k].escaped}});
  return j;
}

}  // namespace fusion
