#pragma once

// Decision procedures for membership of closed regular sets in three
// σ-ideals generated by closed sets, and the kernel / dichotomy / escape
// constructions that only need such a membership test.

#include <map>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/automaton.hpp"

namespace fusion {

enum class IdealKind {
  null_closed,    // E: generated by closed null sets
  nowhere_dense,  // meager ideal; closed members are the nowhere dense sets
  countable,
};

/// Membership of closed sets in a σ-ideal generated by closed sets. The
/// answer depends only on the branch set, and is hereditary.
class IdealOracle {
 public:
  constexpr explicit IdealOracle(IdealKind kind) : kind_(kind) {}

  static IdealOracle parse(const std::string& name) {
    if (name == "E" || name == "E-null") return IdealOracle(IdealKind::null_closed);
    if (name == "NWD") return IdealOracle(IdealKind::nowhere_dense);
    if (name == "CTBL") return IdealOracle(IdealKind::countable);
    throw ParseError("unknown ideal \"" + name + "\" (expected E, NWD or CTBL)");
  }

  IdealKind kind() const noexcept { return kind_; }
  std::string name() const {
    switch (kind_) {
      case IdealKind::null_closed: return "E-null";
      case IdealKind::nowhere_dense: return "NWD";
      case IdealKind::countable: return "CTBL";
    }
    return "?";
  }

  bool member(const TreeAutomaton& t) const {
    if (t.empty()) return true;
    switch (kind_) {
      case IdealKind::null_closed: return branch_measure(t) == 0;
      case IdealKind::nowhere_dense: {
        // Closed with empty interior: no state carries a full subtree.
        for (char f : full_states(t))
          if (f) return false;
        return true;
      }
      case IdealKind::countable: return is_countable(t);
    }
    return false;
  }

  bool positive(const TreeAutomaton& t) const { return !member(t); }

  friend bool operator==(const IdealOracle&, const IdealOracle&) = default;

 private:
  IdealKind kind_;
};

inline const IdealOracle e_null{IdealKind::null_closed};
inline const IdealOracle nwd{IdealKind::nowhere_dense};
inline const IdealOracle ctbl{IdealKind::countable};

inline bool member_closed(const IdealOracle& oracle, const TreeAutomaton& t) { return oracle.member(t); }

/// Residual membership for every state (oracles are shift invariant, so
/// this decides every cylinder trace at once).
inline std::vector<char> member_states(const TreeAutomaton& t, const IdealOracle& oracle) {
  std::vector<char> out(t.size(), 0);
  for (int s = 0; s < t.size(); ++s) out[s] = oracle.member(t.residual(s));
  return out;
}

/// Shortest-then-lexicographic word reaching each state.
inline std::vector<Word> access_words(const TreeAutomaton& t) {
  std::vector<Word> out(t.size());
  std::vector<char> seen(t.size(), 0);
  if (t.empty()) return out;
  std::vector<int> bfs{0};
  seen[0] = 1;
  for (std::size_t i = 0; i < bfs.size(); ++i) {
    int s = bfs[i];
    for (int b = 0; b < 2; ++b) {
      int c = t.next(s, b);
      if (c != TreeAutomaton::none && !seen[c]) {
        seen[c] = 1;
        out[c] = out[s].child(b);
        bfs.push_back(c);
      }
    }
  }
  return out;
}

/// One region removed by a kernel pass: all nodes in the given state.
struct RemovedPiece {
  Word access;             // shortest node in that state
  TreeAutomaton residual;  // the (member) closed set below it
};

struct KernelTrace {
  TreeAutomaton kernel;
  std::vector<std::vector<RemovedPiece>> passes;
};

/// Repeatedly deletes every state whose residual closed set is an oracle
/// member, until no such state remains. The result is the largest closed
/// subset all of whose nonempty cylinder traces are positive.
inline KernelTrace kernel_trace(const TreeAutomaton& t, const IdealOracle& oracle) {
  KernelTrace out{t, {}};
  for (;;) {
    const TreeAutomaton& cur = out.kernel;
    if (cur.empty()) break;
    auto members = member_states(cur, oracle);
    auto access = access_words(cur);
    std::vector<RemovedPiece> removed;
    for (int s = 0; s < cur.size(); ++s)
      if (members[s]) removed.push_back({access[s], cur.residual(s)});
    if (removed.empty()) break;
    out.passes.push_back(std::move(removed));
    if (members[cur.start()]) {
      out.kernel = TreeAutomaton();
      break;
    }
    auto delta = cur.transitions();
    for (auto& row : delta)
      for (int& x : row)
        if (x != TreeAutomaton::none && members[x]) x = TreeAutomaton::none;
    out.kernel = TreeAutomaton(cur.start(), std::move(delta));
  }
  return out;
}

inline TreeAutomaton kernel(const TreeAutomaton& t, const IdealOracle& oracle) {
  return kernel_trace(t, oracle).kernel;
}

/// Nonempty, and every nonempty cylinder trace is positive.
inline bool is_i_perfect(const TreeAutomaton& t, const IdealOracle& oracle) {
  if (t.empty()) return false;
  for (char m : member_states(t, oracle))
    if (m) return false;
  return true;
}

struct MemberCertificate {
  /// The set itself is a single closed member (always so for E-null and
  /// CTBL, where closed members are generators).
  bool generator = false;
  std::vector<std::vector<RemovedPiece>> passes;
};

struct PerfectKernel {
  TreeAutomaton kernel;
};

using Dichotomy = std::variant<MemberCertificate, PerfectKernel>;

/// Either lim t is in the σ-ideal (with the removed regions as witness) or
/// it contains a nonempty I-perfect closed set.
inline Dichotomy dichotomy(const IdealOracle& oracle, const TreeAutomaton& t) {
  auto trace = kernel_trace(t, oracle);
  if (!trace.kernel.empty()) return PerfectKernel{trace.kernel};
  return MemberCertificate{oracle.member(t), std::move(trace.passes)};
}

inline nlohmann::json dichotomy_json(const IdealOracle& oracle, const Dichotomy& d) {
  if (const auto* k = std::get_if<PerfectKernel>(&d))
    return {{"ideal", oracle.name()}, {"verdict", "positive"}, {"kernel", k->kernel}};
  const auto& cert = std::get<MemberCertificate>(d);
  nlohmann::json passes = nlohmann::json::array();
  for (const auto& pass : cert.passes) {
    nlohmann::json p = nlohmann::json::array();
    for (const auto& piece : pass) p.push_back({{"access", piece.access.str()}, {"residual", piece.residual}});
    passes.push_back(p);
  }
  return {{"ideal", oracle.name()}, {"verdict", "member"}, {"generator", cert.generator}, {"passes", passes}};
}

/// A point of lim t avoiding every set in `small`. Stage i refines the
/// current word to the shortest-then-lexicographic strict extension that
/// leaves small[i]'s tree while keeping t's trace positive; the point is then
/// the lexicographically least branch of t through the final word.
inline EventuallyPeriodicPoint escape_point(const TreeAutomaton& t, const std::vector<TreeAutomaton>& small,
                                            const IdealOracle& oracle) {
  if (oracle.member(t)) throw NotPositive("escape_point: the set is an " + oracle.name() + " member");
  for (std::size_t i = 0; i < small.size(); ++i)
    if (!oracle.member(small[i]))
      throw NotPositive("escape_point: avoided set " + std::to_string(i) + " is not an " + oracle.name() + " member");

  auto positive = member_states(t, oracle);
  for (auto& m : positive) m = !m;

  constexpr int X = TreeAutomaton::none;
  Word w;
  for (const auto& d : small) {
    // Level-by-level search over (t-state, d-state); the lexicographically
    // least word per product state dominates all others of the same length.
    std::map<std::pair<int, int>, Word> frontier{{{t.run(w), d.run(w)}, w}};
    const std::size_t bound = static_cast<std::size_t>(t.size()) * (d.size() + 1) + 1;
    std::optional<Word> found;
    for (std::size_t step = 0; step < bound && !found; ++step) {
      std::map<std::pair<int, int>, Word> next;
      for (const auto& [st, v] : frontier)
        for (int b = 0; b < 2; ++b) {
          int ts = t.next(st.first, b);
          if (ts == X || !positive[ts]) continue;
          int ds = st.second == X ? X : d.next(st.second, b);
          Word vb = v.child(b);
          auto [it, inserted] = next.emplace(std::pair{ts, ds}, vb);
          if (!inserted && vb < it->second) it->second = vb;
        }
      for (const auto& [st, v] : next)
        if (st.second == X && (!found || v < *found)) found = v;
      frontier = std::move(next);
    }
    if (!found) throw Stuck("escape_point: no positive refinement avoids the set");
    w = *found;
  }
  return lexmin_branch(t, w);
}

}  // namespace fusion
