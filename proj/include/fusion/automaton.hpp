#pragma once

// Closed subsets of Cantor space presented by deterministic automata over
// {0,1}. Every automaton is kept pruned (each state reachable and with an
// infinite continuation) and minimal, with states numbered in breadth-first
// order from the start, so equal branch sets give equal automata.

#include <array>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/cantor.hpp"
#include "fusion/error.hpp"

namespace fusion {

class TreeAutomaton {
 public:
  static constexpr int none = -1;
  using Transitions = std::vector<std::array<int, 2>>;

  /// The empty closed set.
  TreeAutomaton() = default;

  /// Any transition table; the result is pruned and minimized. States that
  /// are unreachable or have only finite continuations are dropped.
  TreeAutomaton(int start, Transitions delta) { canonicalize(start, std::move(delta)); }

  bool empty() const noexcept { return delta_.empty(); }
  int size() const noexcept { return static_cast<int>(delta_.size()); }
  int start() const noexcept { return empty() ? none : 0; }
  int next(int state, int bit) const { return delta_[state][bit]; }
  const Transitions& transitions() const noexcept { return delta_; }

  /// State reached after reading w from `from`, or none.
  int run(const Word& w, int from) const {
    int s = from;
    for (std::size_t i = 0; i < w.size() && s != none; ++i) s = delta_[s][w.bit(i)];
    return s;
  }
  int run(const Word& w) const { return empty() ? none : run(w, 0); }

  /// w ∈ T, i.e. [w] meets the branch set.
  bool contains(const Word& w) const { return run(w) != none; }

  /// The closed set below a state, shifted to the root.
  TreeAutomaton residual(int state) const { return TreeAutomaton(state, delta_); }

  int children(int state) const {
    return (delta_[state][0] != none) + (delta_[state][1] != none);
  }

  friend bool operator==(const TreeAutomaton&, const TreeAutomaton&) = default;

 private:
  void canonicalize(int start, Transitions delta);

  Transitions delta_;
};

inline void TreeAutomaton::canonicalize(int start, Transitions delta) {
  const int n = static_cast<int>(delta.size());
  delta_.clear();
  if (start == none || start >= n) return;
  for (auto& row : delta)
    for (int& t : row)
      if (t < none || t >= n) throw ParseError("transition target out of range");

  // Live states: greatest fixpoint of "has a child that is live".
  std::vector<char> live(n, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      if (!live[s]) continue;
      bool ok = false;
      for (int b = 0; b < 2; ++b)
        if (delta[s][b] != none && live[delta[s][b]]) ok = true;
      if (!ok) {
        live[s] = 0;
        changed = true;
      }
    }
  }
  if (!live[start]) return;
  for (auto& row : delta)
    for (int& t : row)
      if (t != none && !live[t]) t = none;

  // Reachable live states.
  std::vector<int> order;
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    order.push_back(s);
    for (int b = 0; b < 2; ++b) {
      int t = delta[s][b];
      if (t != none && !seen[t]) {
        seen[t] = 1;
        q.push(t);
      }
    }
  }

  // Moore partition refinement; the implicit dead state is its own class.
  std::vector<int> cls(n, 0);
  int classes = 1;
  for (;;) {
    std::map<std::array<int, 3>, int> sig;
    std::vector<int> next_cls(n, 0);
    for (int s : order) {
      std::array<int, 3> key{cls[s], delta[s][0] == none ? none : cls[delta[s][0]],
                             delta[s][1] == none ? none : cls[delta[s][1]]};
      auto [it, inserted] = sig.emplace(key, static_cast<int>(sig.size()));
      next_cls[s] = it->second;
    }
    int count = static_cast<int>(sig.size());
    cls = std::move(next_cls);
    if (count == classes) break;
    classes = count;
  }

  // Breadth-first renumbering of the quotient, child 0 first.
  std::vector<int> rep(classes, none);
  for (int s : order)
    if (rep[cls[s]] == none) rep[cls[s]] = s;
  std::vector<int> id(classes, none);
  std::vector<int> bfs{cls[start]};
  id[cls[start]] = 0;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int s = rep[bfs[i]];
    for (int b = 0; b < 2; ++b) {
      int t = delta[s][b];
      if (t == none) continue;
      int c = cls[t];
      if (id[c] == none) {
        id[c] = static_cast<int>(bfs.size());
        bfs.push_back(c);
      }
    }
  }
  delta_.assign(bfs.size(), {none, none});
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int s = rep[bfs[i]];
    for (int b = 0; b < 2; ++b)
      if (delta[s][b] != none) delta_[i][b] = id[cls[delta[s][b]]];
  }
}

/// prefix · period^ω
struct EventuallyPeriodicPoint {
  Word prefix;
  Word period;

  /// First n bits of the point.
  Word bits(std::size_t n) const {
    std::string s = prefix.str();
    while (s.size() < n) s += period.str();
    return Word(s.substr(0, n));
  }

  friend bool operator==(const EventuallyPeriodicPoint&, const EventuallyPeriodicPoint&) = default;
};

inline void to_json(nlohmann::json& j, const EventuallyPeriodicPoint& p) {
  j = {{"prefix", p.prefix.str()}, {"period", p.period.str()}};
}

// ---------------------------------------------------------------------------
// Fixtures

namespace zoo {
constexpr int X = TreeAutomaton::none;

inline TreeAutomaton full() { return TreeAutomaton(0, {{0, 0}}); }
inline TreeAutomaton zero() { return TreeAutomaton(0, {{0, X}}); }
/// [0]
inline TreeAutomaton half() { return TreeAutomaton(0, {{1, X}, {1, 1}}); }
/// branches avoiding "11"
inline TreeAutomaton av11() { return TreeAutomaton(0, {{0, 1}, {0, X}}); }
/// [0] ∪ {1^ω}
inline TreeAutomaton mix() { return TreeAutomaton(0, {{1, 2}, {1, 1}, {X, 2}}); }
/// {0^ω} ∪ {0^n 1 0^ω}
inline TreeAutomaton comb() { return TreeAutomaton(0, {{0, 1}, {1, X}}); }

inline std::optional<TreeAutomaton> by_name(const std::string& name) {
  if (name == "FULL") return full();
  if (name == "ZERO") return zero();
  if (name == "HALF") return half();
  if (name == "AV11") return av11();
  if (name == "MIX") return mix();
  if (name == "COMB") return comb();
  if (name == "EMPTY") return TreeAutomaton();
  return std::nullopt;
}

inline std::vector<std::pair<std::string, TreeAutomaton>> all() {
  return {{"FULL", full()}, {"ZERO", zero()}, {"HALF", half()},
          {"AV11", av11()}, {"MIX", mix()},   {"COMB", comb()}};
}
}  // namespace zoo

// ---------------------------------------------------------------------------
// Constructions

/// The clopen set as a closed set.
inline TreeAutomaton clopen_automaton(const ClopenSet& c) {
  if (c.empty()) return TreeAutomaton();
  // Trie over proper prefixes of generators; state 0 is the full state.
  TreeAutomaton::Transitions delta{{0, 0}};
  std::map<Word, int> node;
  auto state_of = [&](const Word& w) {
    auto it = node.find(w);
    if (it != node.end()) return it->second;
    int id = static_cast<int>(delta.size());
    delta.push_back({TreeAutomaton::none, TreeAutomaton::none});
    node.emplace(w, id);
    return id;
  };
  if (c.is_whole()) return TreeAutomaton(0, delta);
  int root = state_of(Word());
  for (const auto& g : c.generators()) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      int from = state_of(g.prefix(i));
      int to = (i + 1 == g.size()) ? 0 : state_of(g.prefix(i + 1));
      delta[from][g.bit(i)] = to;
    }
  }
  return TreeAutomaton(root, delta);
}

enum class SetOp { intersect, unite };

inline TreeAutomaton combine(const TreeAutomaton& a, const TreeAutomaton& b, SetOp op) {
  constexpr int X = TreeAutomaton::none;
  if (op == SetOp::intersect && (a.empty() || b.empty())) return TreeAutomaton();
  if (op == SetOp::unite && a.empty()) return b;
  if (op == SetOp::unite && b.empty()) return a;
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> pairs;
  auto get = [&](int s, int t) {
    auto [it, inserted] = id.emplace(std::pair{s, t}, static_cast<int>(pairs.size()));
    if (inserted) pairs.emplace_back(s, t);
    return it->second;
  };
  get(a.start(), b.start());
  TreeAutomaton::Transitions delta;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto [s, t] = pairs[i];
    std::array<int, 2> row{X, X};
    for (int bit = 0; bit < 2; ++bit) {
      int sa = s == X ? X : a.next(s, bit);
      int tb = t == X ? X : b.next(t, bit);
      bool keep = op == SetOp::intersect ? (sa != X && tb != X) : (sa != X || tb != X);
      if (keep) row[bit] = get(sa, tb);
    }
    delta.push_back(row);
  }
  return TreeAutomaton(0, std::move(delta));
}

/// lim a ⊆ lim b
inline bool is_subset(const TreeAutomaton& a, const TreeAutomaton& b) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  std::set<std::pair<int, int>> seen{{a.start(), b.start()}};
  std::vector<std::pair<int, int>> stack{{a.start(), b.start()}};
  while (!stack.empty()) {
    auto [s, t] = stack.back();
    stack.pop_back();
    for (int bit = 0; bit < 2; ++bit) {
      int sa = a.next(s, bit);
      if (sa == TreeAutomaton::none) continue;
      int tb = b.next(t, bit);
      if (tb == TreeAutomaton::none) return false;  // a has a branch through here, b none
      if (seen.emplace(sa, tb).second) stack.emplace_back(sa, tb);
    }
  }
  return true;
}

/// T(w): the branches through w. Empty when w ∉ T.
inline TreeAutomaton restrict(const TreeAutomaton& t, const Word& w) {
  int end = t.run(w);
  if (end == TreeAutomaton::none) return TreeAutomaton();
  const int offset = static_cast<int>(w.size());
  TreeAutomaton::Transitions delta(offset, {TreeAutomaton::none, TreeAutomaton::none});
  for (const auto& row : t.transitions()) {
    std::array<int, 2> shifted = row;
    for (int& x : shifted)
      if (x != TreeAutomaton::none) x += offset;
    delta.push_back(shifted);
  }
  for (int i = 0; i < offset; ++i)
    delta[i][w.bit(i)] = (i + 1 == offset) ? end + offset : i + 1;
  return TreeAutomaton(offset == 0 ? end : 0, std::move(delta));
}

struct Stem {
  Word word;
  /// Set when every node has exactly one child (a single branch), where no
  /// maximal stem exists; `word` is then empty.
  bool point_tree = false;
};

inline Stem stem(const TreeAutomaton& t) {
  if (t.empty()) throw EmptyTree("stem of the empty tree");
  std::vector<char> visited(t.size(), 0);
  int s = t.start();
  Word w;
  while (t.children(s) == 1) {
    if (visited[s]) return {Word(), true};
    visited[s] = 1;
    int b = t.next(s, 0) != TreeAutomaton::none ? 0 : 1;
    w = w.child(b);
    s = t.next(s, b);
  }
  return {w, false};
}

/// |T ∩ 2^n| starting from a given state.
inline BigInt level_count_from(const TreeAutomaton& t, int state, std::size_t n) {
  if (t.empty() || state == TreeAutomaton::none) return 0;
  std::vector<BigInt> cnt(t.size(), 0);
  cnt[state] = 1;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<BigInt> nxt(t.size(), 0);
    for (int s = 0; s < t.size(); ++s) {
      if (cnt[s] == 0) continue;
      for (int b = 0; b < 2; ++b)
        if (t.next(s, b) != TreeAutomaton::none) nxt[t.next(s, b)] += cnt[s];
    }
    cnt = std::move(nxt);
  }
  BigInt total = 0;
  for (const auto& c : cnt) total += c;
  return total;
}

inline BigInt level_count(const TreeAutomaton& t, std::size_t n) {
  return level_count_from(t, t.start(), n);
}

/// Words of length k in T that extend w, lexicographically (k ≥ |w|).
inline std::vector<Word> level_words(const TreeAutomaton& t, const Word& w, std::size_t k) {
  std::vector<Word> out;
  int s = t.run(w);
  if (s == TreeAutomaton::none) return out;
  std::vector<std::pair<Word, int>> stack{{w, s}};
  while (!stack.empty()) {
    auto [v, st] = stack.back();
    stack.pop_back();
    if (v.size() >= k) {
      out.push_back(v);
      continue;
    }
    for (int b = 1; b >= 0; --b)
      if (t.next(st, b) != TreeAutomaton::none) stack.emplace_back(v.child(b), t.next(st, b));
  }
  return out;
}

/// States whose residual is the whole space: greatest fixpoint of
/// "both children exist and are in the set".
inline std::vector<char> full_states(const TreeAutomaton& t) {
  std::vector<char> in(t.size(), 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (int s = 0; s < t.size(); ++s) {
      if (!in[s]) continue;
      int a = t.next(s, 0), b = t.next(s, 1);
      if (a == TreeAutomaton::none || b == TreeAutomaton::none || !in[a] || !in[b]) {
        in[s] = 0;
        changed = true;
      }
    }
  }
  return in;
}

/// Exact μ of the residual at every state. Full states get 1; the others
/// satisfy m_s = (m_{s0} + m_{s1}) / 2 with a missing child contributing 0,
/// a system that is nonsingular once the full states are fixed.
inline std::vector<Rational> state_measures(const TreeAutomaton& t) {
  const int n = t.size();
  std::vector<Rational> m(n, 0);
  auto full = full_states(t);
  std::vector<int> var(n, -1), states;
  for (int s = 0; s < n; ++s) {
    if (full[s])
      m[s] = 1;
    else {
      var[s] = static_cast<int>(states.size());
      states.push_back(s);
    }
  }
  const int k = static_cast<int>(states.size());
  if (k == 0) return m;
  // Augmented matrix rows: m_s − ½ Σ m_child = ½ · #full children.
  std::vector<std::vector<Rational>> a(k, std::vector<Rational>(k + 1, 0));
  const Rational half(1, 2);
  for (int i = 0; i < k; ++i) {
    int s = states[i];
    a[i][i] += 1;
    for (int b = 0; b < 2; ++b) {
      int c = t.next(s, b);
      if (c == TreeAutomaton::none) continue;
      if (full[c])
        a[i][k] += half;
      else
        a[i][var[c]] -= half;
    }
  }
  for (int col = 0; col < k; ++col) {
    int piv = col;
    while (piv < k && a[piv][col] == 0) ++piv;
    if (piv == k) throw std::logic_error("singular measure system");
    std::swap(a[piv], a[col]);
    for (int r = 0; r < k; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (int i = 0; i < k; ++i) m[states[i]] = a[i][k] / a[i][i];
  return m;
}

/// μ(lim T), exactly.
inline Rational branch_measure(const TreeAutomaton& t) {
  if (t.empty()) return 0;
  return state_measures(t)[t.start()];
}

/// Strongly connected components (Tarjan); returns the component id of
/// every state.
inline std::vector<int> components(const TreeAutomaton& t) {
  const int n = t.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on(n, 0);
  int counter = 0, ncomp = 0;
  auto visit = [&](auto&& self, int v) -> void {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on[v] = 1;
    for (int b = 0; b < 2; ++b) {
      int w = t.next(v, b);
      if (w == TreeAutomaton::none) continue;
      if (index[w] < 0) {
        self(self, w);
        low[v] = std::min(low[v], low[w]);
      } else if (on[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on[w] = 0;
        comp[w] = ncomp;
      } while (w != v);
      ++ncomp;
    }
  };
  for (int s = 0; s < n; ++s)
    if (index[s] < 0) visit(visit, s);
  return comp;
}

/// lim T is countable iff no state has both children inside its own
/// strongly connected component (two incomparable loops pump a perfect
/// subtree; otherwise every branch is eventually a simple cycle).
inline bool is_countable(const TreeAutomaton& t) {
  auto comp = components(t);
  for (int s = 0; s < t.size(); ++s) {
    int a = t.next(s, 0), b = t.next(s, 1);
    if (a != TreeAutomaton::none && b != TreeAutomaton::none && comp[a] == comp[s] &&
        comp[b] == comp[s])
      return false;
  }
  return true;
}

/// Every nonempty clopen trace has positive measure.
inline bool self_supporting(const TreeAutomaton& t) {
  for (const auto& m : state_measures(t))
    if (m == 0) return false;
  return true;
}

/// Membership of an eventually periodic point in lim T.
inline bool contains_point(const TreeAutomaton& t, const EventuallyPeriodicPoint& x) {
  if (x.period.empty()) throw ParseError("eventually periodic point needs a nonempty period");
  int s = t.run(x.prefix);
  std::vector<char> seen(t.size(), 0);
  while (s != TreeAutomaton::none && !seen[s]) {
    seen[s] = 1;
    s = t.run(x.period, s);
  }
  return s != TreeAutomaton::none;
}

/// The lexicographically least branch of T through w, which is eventually
/// periodic because the greedy choice depends only on the state.
inline EventuallyPeriodicPoint lexmin_branch(const TreeAutomaton& t, const Word& w) {
  int s = t.run(w);
  if (s == TreeAutomaton::none) throw EmptyTree("no branch through " + w.str());
  std::map<int, std::size_t> at;
  std::string path;
  while (!at.count(s)) {
    at[s] = path.size();
    int b = t.next(s, 0) != TreeAutomaton::none ? 0 : 1;
    path.push_back(b ? '1' : '0');
    s = t.next(s, b);
  }
  std::size_t cut = at[s];
  return {w.concat(Word(path.substr(0, cut))), Word(path.substr(cut))};
}

// ---------------------------------------------------------------------------
// Text and JSON formats

/// Text format: `states: N`, `start: i`, then `edge: s bit t` lines. Blank
/// lines and `#` comments are ignored.
inline TreeAutomaton parse_automaton(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int states = -1, start = 0;
  TreeAutomaton::Transitions delta;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "states:") {
      if (!(ls >> states) || states < 0) throw ParseError("bad states line: " + line);
      delta.assign(states, {TreeAutomaton::none, TreeAutomaton::none});
    } else if (key == "start:") {
      if (!(ls >> start)) throw ParseError("bad start line: " + line);
    } else if (key == "edge:") {
      int s, b, t;
      if (!(ls >> s >> b >> t) || b < 0 || b > 1 || s < 0 || s >= states || t < 0 || t >= states)
        throw ParseError("bad edge line: " + line);
      delta[s][b] = t;
    } else {
      throw ParseError("unknown line: " + line);
    }
  }
  if (states < 0) throw ParseError("missing `states:` line");
  if (states == 0) return TreeAutomaton();
  if (start < 0 || start >= states) throw ParseError("start state out of range");
  return TreeAutomaton(start, std::move(delta));
}

inline std::string format_automaton(const TreeAutomaton& t) {
  std::ostringstream out;
  out << "states: " << t.size() << "\nstart: 0\n";
  for (int s = 0; s < t.size(); ++s)
    for (int b = 0; b < 2; ++b)
      if (t.next(s, b) != TreeAutomaton::none) out << "edge: " << s << ' ' << b << ' ' << t.next(s, b) << '\n';
  return out.str();
}

inline void to_json(nlohmann::json& j, const TreeAutomaton& t) {
  nlohmann::json edges = nlohmann::json::array();
  for (int s = 0; s < t.size(); ++s)
    for (int b = 0; b < 2; ++b)
      if (t.next(s, b) != TreeAutomaton::none) edges.push_back({s, b, t.next(s, b)});
  j = {{"states", t.size()}, {"start", 0}, {"edges", edges}};
}

inline void from_json(const nlohmann::json& j, TreeAutomaton& t) {
  try {
    int states = j.at("states").get<int>();
    if (states == 0) {
      t = TreeAutomaton();
      return;
    }
    int start = j.value("start", 0);
    TreeAutomaton::Transitions delta(states, {TreeAutomaton::none, TreeAutomaton::none});
    for (const auto& e : j.at("edges")) {
      int s = e.at(0).get<int>(), b = e.at(1).get<int>(), to = e.at(2).get<int>();
      if (s < 0 || s >= states || to < 0 || to >= states || b < 0 || b > 1)
        throw ParseError("edge out of range");
      delta[s][b] = to;
    }
    if (start < 0 || start >= states) throw ParseError("start state out of range");
    t = TreeAutomaton(start, std::move(delta));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("automaton JSON: ") + e.what());
  }
}

/// Accepts either the text format or JSON (first non-blank char '{').
inline TreeAutomaton parse_automaton_any(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && text[pos] == '{') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(e.what());
    }
    return j.get<TreeAutomaton>();
  }
  return parse_automaton(text);
}

}  // namespace fusion
