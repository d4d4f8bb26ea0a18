#pragma once

// Codes for closed sets (families of avoided basic open sets) and Souslin
// schemes of clopen sets coding G_δ sets.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/automaton.hpp"
#include "fusion/cantor.hpp"
#include "fusion/error.hpp"

namespace fusion {

/// A closed set coded by the family of basic open sets disjoint from it.
/// The family is given as a membership test.
struct ClosedCode {
  std::function<bool(const Word&)> avoided;

  /// The code of lim t: [w] misses lim t iff w ∉ t.
  static ClosedCode of(const TreeAutomaton& t) {
    return {[t](const Word& w) { return !t.contains(w); }};
  }

  /// Avoided words of length ≤ depth, in shortlex order.
  std::vector<Word> enumerate(std::size_t depth) const {
    std::vector<Word> out;
    for (std::size_t n = 0; n <= depth; ++n)
      for (auto& w : all_words(n))
        if (avoided(w)) out.push_back(std::move(w));
    return out;
  }
};

/// Checks the closure property "[w] ⊆ ⋃ avoided ⇒ w avoided" for all words
/// of length ≤ depth, covering computed from avoided words of length ≤ depth.
/// Reports the first violating word in shortlex order.
inline CheckResult closed_code_validate(const ClosedCode& code, std::size_t depth) {
  // covered[n][i]: the i-th word of length n is covered.
  std::vector<std::vector<char>> covered(depth + 1);
  for (std::size_t n = depth + 1; n-- > 0;) {
    auto words = all_words(n);
    covered[n].assign(words.size(), 0);
    for (std::size_t i = 0; i < words.size(); ++i) {
      bool c = code.avoided(words[i]);
      for (std::size_t k = 0; k < n && !c; ++k) c = code.avoided(words[i].prefix(k));
      if (!c && n < depth) c = covered[n + 1][2 * i] && covered[n + 1][2 * i + 1];
      covered[n][i] = c;
    }
  }
  for (std::size_t n = 0; n <= depth; ++n) {
    auto words = all_words(n);
    for (std::size_t i = 0; i < words.size(); ++i)
      if (covered[n][i] && !code.avoided(words[i]))
        return Violation{"(*)", "\"" + words[i].str() + "\" has both children avoided but is not avoided itself"};
  }
  return std::nullopt;
}

/// Node of a Souslin scheme: a word over {0,…,width−1}, one decimal digit
/// per position.
using SchemeNode = std::string;

/// A Souslin scheme of clopen sets, materialized on demand. An empty
/// ClopenSet is the empty node value.
struct SouslinScheme {
  std::size_t width = 4;
  std::function<ClopenSet(const SchemeNode&)> value;

  std::vector<SchemeNode> children(const SchemeNode& node) const {
    std::vector<SchemeNode> out;
    for (std::size_t d = 0; d < width; ++d) out.push_back(node + static_cast<char>('0' + d));
    return out;
  }

  /// All nodes of length n, lexicographically.
  std::vector<SchemeNode> level(std::size_t n) const {
    std::vector<SchemeNode> cur{""};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<SchemeNode> next;
      for (const auto& v : cur)
        for (auto& c : children(v)) next.push_back(std::move(c));
      cur = std::move(next);
    }
    return cur;
  }
};

/// Verifies, on all nodes of length ≤ depth in shortlex order:
///  (i)   every generator of U_τ has length ≥ |τ| (diam([w]) = 2^−|w|),
///  (ii)  U_τ ⊆ U_parent,
///  (iii) a nonempty node has a nonempty child.
inline CheckResult scheme_validate(const SouslinScheme& s, std::size_t depth) {
  if (s.width == 0 || s.width > 10) return Violation{"width", "width must be in 1..10"};
  std::vector<std::pair<SchemeNode, ClopenSet>> cur{{"", s.value("")}};
  for (std::size_t n = 0; n <= depth; ++n) {
    std::vector<std::pair<SchemeNode, ClopenSet>> next;
    for (const auto& [node, u] : cur) {
      for (const auto& w : u.generators())
        if (w.size() < node.size())
          return Violation{"(i)", "node \"" + node + "\" has generator \"" + w.str() + "\" shorter than the node"};
      if (n == depth) continue;
      bool nonempty_child = false;
      for (const auto& c : s.children(node)) {
        ClopenSet v = s.value(c);
        nonempty_child = nonempty_child || !v.empty();
        next.emplace_back(c, std::move(v));
      }
      if (!u.empty() && !nonempty_child)
        return Violation{"(iii)", "nonempty node \"" + node + "\" has only empty children"};
    }
    // (ii) against the parent, in node order
    for (std::size_t i = 0; i < next.size(); ++i) {
      const ClopenSet& parent = cur[i / s.width].second;
      if (!clopen_subset(next[i].second, parent))
        return Violation{"(ii)", "node \"" + next[i].first + "\" is not inside its parent"};
    }
    cur = std::move(next);
  }
  return std::nullopt;
}

struct MeetsOpen {
  bool yes = false;
  std::optional<SchemeNode> witness;
};

/// Whether some nonempty node value within depth lies inside u. "No" only
/// means none was found up to depth.
inline MeetsOpen meets_open(const SouslinScheme& s, const ClopenSet& u, std::size_t depth) {
  if (u.empty()) return {};
  for (std::size_t n = 0; n <= depth; ++n)
    for (const auto& node : s.level(n)) {
      ClopenSet v = s.value(node);
      if (!v.empty() && clopen_subset(v, u)) return {true, node};
    }
  return {};
}

/// ⋃_{|τ|=depth} U_τ, a clopen over-approximation of the closure.
inline ClopenSet closure_approx(const SouslinScheme& s, std::size_t depth) {
  ClopenSet out;
  for (const auto& node : s.level(depth)) out = clopen_union(out, s.value(node));
  return out;
}

/// The closed set whose complement is generated by `avoided`.
inline TreeAutomaton closed_complement(const ClopenSet& avoided) {
  return clopen_automaton(clopen_complement(avoided));
}

/// Scheme of lim(base) ∖ ⋃[removed]: node τ over digits {0,1} is the
/// cylinder of the word τ when that word is in the remaining tree; other
/// digits and nodes are empty.
inline SouslinScheme gdelta_from_removal(const TreeAutomaton& base, const std::vector<Word>& removed,
                                         std::size_t width = 4) {
  TreeAutomaton rest = combine(base, closed_complement(ClopenSet(removed)), SetOp::intersect);
  return {width, [rest](const SchemeNode& node) -> ClopenSet {
            std::string bits;
            for (char d : node) {
              if (d != '0' && d != '1') return {};
              bits.push_back(d);
            }
            Word w(bits);
            if (!rest.contains(w)) return {};
            return ClopenSet::cylinder(w);
          }};
}

/// Scheme whose node j₁…jₙ is the cylinder [0^{j₁}1 … 0^{jₙ}1]: the G_δ set
/// of points with infinitely many ones, with blocks truncated below width.
inline SouslinScheme bounded_baire_scheme(std::size_t width = 4) {
  return {width, [](const SchemeNode& node) {
            std::string bits;
            for (char d : node) bits += std::string(static_cast<std::size_t>(d - '0'), '0') + "1";
            return ClopenSet::cylinder(Word(bits));
          }};
}

/// Scheme whose children of [v] are [v·u] for the first `width` nonempty
/// words u in shortlex order ("0","1","00","01",…). Level unions are the
/// whole space.
inline SouslinScheme breadth_first_scheme(std::size_t width = 4) {
  auto nth = [](std::size_t j) {
    // j-th nonempty word in shortlex order
    std::size_t len = 1, count = 2;
    while (j >= count) {
      j -= count;
      ++len;
      count *= 2;
    }
    std::string s(len, '0');
    for (std::size_t k = 0; k < len; ++k)
      if (j >> (len - 1 - k) & 1) s[k] = '1';
    return Word(s);
  };
  return {width, [nth](const SchemeNode& node) {
            Word w;
            for (char d : node) w = w.concat(nth(static_cast<std::size_t>(d - '0')));
            return ClopenSet::cylinder(w);
          }};
}

/// A scheme given by explicit node values; absent nodes are empty.
inline SouslinScheme materialized_scheme(std::map<SchemeNode, ClopenSet> nodes, std::size_t width = 4) {
  return {width, [nodes = std::move(nodes)](const SchemeNode& node) -> ClopenSet {
            auto it = nodes.find(node);
            return it == nodes.end() ? ClopenSet() : it->second;
          }};
}

/// JSON: either an array of {node, words}, or {"width": w, "nodes": [...]}.
inline SouslinScheme parse_scheme_json(const nlohmann::json& j) {
  try {
    std::size_t width = 4;
    const nlohmann::json* list = &j;
    if (j.is_object()) {
      width = j.value("width", std::size_t{4});
      list = &j.at("nodes");
    }
    std::map<SchemeNode, ClopenSet> nodes;
    for (const auto& e : *list) {
      SchemeNode node = e.at("node").get<std::string>();
      for (char d : node)
        if (d < '0' || static_cast<std::size_t>(d - '0') >= width)
          throw ParseError("scheme node \"" + node + "\" has a digit outside the width");
      nodes[node] = e.at("words").get<ClopenSet>();
    }
    return materialized_scheme(std::move(nodes), width);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scheme JSON: ") + e.what());
  }
}

inline nlohmann::json scheme_json(const SouslinScheme& s, std::size_t depth) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t n = 0; n <= depth; ++n)
    for (const auto& node : s.level(n)) {
      ClopenSet v = s.value(node);
      if (!v.empty()) nodes.push_back({{"node", node}, {"words", v}});
    }
  return {{"width", s.width}, {"nodes", nodes}};
}

}  // namespace fusion
