#pragma once

// The closed-null fusion game. Round n: Adam extends his word to ξ_n ∈ 2^n,
// then Eve answers with a clopen C_n ⊆ [ξ_n] of relative measure < 1/n.
// Eve wins a play when x = ⋃ξ_n lies outside A or in all but finitely many
// C_n.

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/automaton.hpp"
#include "fusion/cantor.hpp"
#include "fusion/game.hpp"

namespace fusion {

using NullMove = std::variant<Word, ClopenSet>;

}  // namespace fusion

template <>
struct nlohmann::adl_serializer<fusion::NullMove> {
  static void to_json(json& j, const fusion::NullMove& m) {
    std::visit([&](const auto& v) { j = v; }, m);
  }
  static void from_json(const json& j, fusion::NullMove& m) {
    if (j.is_string())
      m = j.get<fusion::Word>();
    else
      m = j.get<fusion::ClopenSet>();
  }
};

namespace fusion {

namespace null_game {

/// Last Adam word in the play, or the empty word.
inline Word last_word(std::span<const NullMove> play) {
  for (std::size_t i = play.size(); i-- > 0;)
    if (const auto* w = std::get_if<Word>(&play[i])) return *w;
  return Word();
}

/// Eve's moves so far, C_1, C_2, …
inline std::vector<ClopenSet> eve_moves(std::span<const NullMove> play) {
  std::vector<ClopenSet> out;
  for (std::size_t i = 1; i < play.size(); i += 2)
    if (const auto* c = std::get_if<ClopenSet>(&play[i])) out.push_back(*c);
  return out;
}

}  // namespace null_game

/// Rule check for the move made at round n after `prev`.
inline CheckResult validate_null_move(std::size_t n, std::span<const NullMove> prev, const NullMove& move) {
  if (n == 0) return Violation{"round", "rounds start at 1"};
  if (to_move(prev.size()) == Player::adam) {
    const auto* xi = std::get_if<Word>(&move);
    if (!xi) return Violation{"type", "Adam must play a word"};
    if (xi->size() != n)
      return Violation{"length", "ξ_" + std::to_string(n) + " must have length " + std::to_string(n) + ", got \"" +
                                     xi->str() + "\""};
    Word before = null_game::last_word(prev);
    if (!before.is_prefix_of(*xi))
      return Violation{"extension", "\"" + xi->str() + "\" does not extend \"" + before.str() + "\""};
    return std::nullopt;
  }
  const auto* c = std::get_if<ClopenSet>(&move);
  if (!c) return Violation{"type", "Eve must play a clopen set"};
  Word xi = null_game::last_word(prev);
  if (!clopen_subset(*c, ClopenSet::cylinder(xi)))
    return Violation{"containment", "C_" + std::to_string(n) + " is not inside [" + xi.str() + "]"};
  Rational rel = measure(*c, xi);
  if (rel * n >= 1)
    return Violation{"measure", "relative measure " + to_string(rel) + " is not below 1/" + std::to_string(n)};
  return std::nullopt;
}

inline GameScheme<NullMove> null_game_scheme() {
  return {[](std::span<const NullMove> prev, const NullMove& m) {
            return validate_null_move(round_of(prev.size()), prev, m);
          },
          {}};
}

/// Eve's answer at σ (|σ| = n) against the closed null set D: the level-k
/// words of D through σ for the least k with |D(σ) ∩ 2^k| · n < 2^(k−n),
/// i.e. absolute measure below 2^(−n)/n.
inline ClopenSet null_cover_move(const TreeAutomaton& d, const Word& sigma, std::size_t max_length = 4096) {
  const std::size_t n = sigma.size();
  int s = d.run(sigma);
  if (s == TreeAutomaton::none || n == 0) return {};
  for (std::size_t k = n; k <= max_length; ++k) {
    BigInt count = level_count_from(d, s, k - n);
    if (count * n < pow2(k - n)) return ClopenSet(level_words(d, sigma, k));
  }
  throw Stuck("no cover of generator length ≤ " + std::to_string(max_length) + " below \"" + sigma.str() + "\"");
}

/// Increasing unions D_n = covers[0] ∪ … ∪ covers[n−1].
inline std::vector<TreeAutomaton> cumulative_covers(const std::vector<TreeAutomaton>& covers) {
  std::vector<TreeAutomaton> out;
  TreeAutomaton acc;
  for (const auto& c : covers) {
    acc = combine(acc, c, SetOp::unite);
    out.push_back(acc);
  }
  return out;
}

/// Eve's strategy from a list of closed null covers. Throws BadParams when a
/// cover has positive measure.
inline Responder<NullMove> null_eve_synthesize(const std::vector<TreeAutomaton>& covers) {
  for (std::size_t i = 0; i < covers.size(); ++i) {
    Rational m = branch_measure(covers[i]);
    if (m != 0) throw BadParams("cover " + std::to_string(i) + " is not null (measure " + to_string(m) + ")");
  }
  auto d = cumulative_covers(covers);
  return [d](std::span<const NullMove> play) -> NullMove {
    Word sigma = null_game::last_word(play);
    std::size_t n = sigma.size();
    if (d.empty() || n == 0) return ClopenSet();
    return null_cover_move(d[std::min(n, d.size()) - 1], sigma);
  };
}

/// The cover set D_n used at round n (empty when there are no covers).
inline TreeAutomaton null_cover_at(const std::vector<TreeAutomaton>& cumulative, std::size_t n) {
  if (cumulative.empty() || n == 0) return {};
  return cumulative[std::min(n, cumulative.size()) - 1];
}

struct NullWitness {
  std::vector<ClopenSet> e;  // e[n−1] = E_n
  std::vector<ClopenSet> d;  // d[n−1] = ⋂_{n ≤ m ≤ depth} E_m
};

/// E_n = ⋃_{σ ∈ 2^n} (Eve's n-th move in the play where Adam plays the
/// prefixes of σ). Throws IllegalStrategy on an illegal Eve move.
inline NullWitness extract_witness(const Responder<NullMove>& eve, std::size_t depth) {
  NullWitness out;
  std::vector<std::vector<Word>> words(depth);
  std::vector<NullMove> play;
  std::function<void(const Word&)> walk = [&](const Word& at) {
    std::size_t n = at.size();
    if (n == depth) return;
    for (int b = 0; b < 2; ++b) {
      Word xi = at.child(b);
      play.emplace_back(xi);
      NullMove c = eve(play);
      if (auto v = validate_null_move(n + 1, play, c))
        throw IllegalStrategy("Eve at round " + std::to_string(n + 1) + " after \"" + xi.str() + "\" [" +
                              v->clause + "]: " + v->detail);
      const auto& g = std::get<ClopenSet>(c).generators();
      words[n].insert(words[n].end(), g.begin(), g.end());
      play.push_back(std::move(c));
      walk(xi);
      play.pop_back();
      play.pop_back();
    }
  };
  walk(Word());
  for (auto& w : words) out.e.emplace_back(std::move(w));
  out.d.assign(depth, ClopenSet());
  for (std::size_t n = depth; n-- > 0;)
    out.d[n] = n + 1 == depth ? out.e[n] : clopen_intersect(out.e[n], out.d[n + 1]);
  return out;
}

enum class NullStatus { eve_cert_not_in_a, eve_tracking, adam_pending };

inline std::string to_string(NullStatus s) {
  switch (s) {
    case NullStatus::eve_cert_not_in_a: return "EVE_CERT_NOT_IN_A";
    case NullStatus::eve_tracking: return "EVE_TRACKING";
    case NullStatus::adam_pending: return "ADAM_PENDING";
  }
  return "?";
}

struct NullPayoff {
  NullStatus status = NullStatus::adam_pending;
  std::size_t since = 0;  // for eve_tracking

  friend bool operator==(const NullPayoff&, const NullPayoff&) = default;
};

/// Finite-depth verdict: Adam's current cylinder has left A, or A ∩ [ξ] lies
/// in every C_j for since ≤ j ≤ n (n = Eve's last round), or pending.
inline NullPayoff null_payoff_status(std::span<const NullMove> play, const TreeAutomaton& a) {
  Word xi = null_game::last_word(play);
  if (!a.contains(xi)) return {NullStatus::eve_cert_not_in_a, 0};
  auto cs = null_game::eve_moves(play);
  TreeAutomaton here = restrict(a, xi);
  std::size_t since = 0;
  for (std::size_t j = cs.size(); j-- > 0;) {
    if (!is_subset(here, clopen_automaton(cs[j]))) break;
    since = j + 1;
  }
  if (since == 0) return {NullStatus::adam_pending, 0};
  return {NullStatus::eve_tracking, since};
}

inline nlohmann::json to_json_value(const NullPayoff& p) {
  nlohmann::json j{{"status", to_string(p.status)}};
  if (p.status == NullStatus::eve_tracking) j["since"] = p.since;
  return j;
}

/// Finite surrogate of the game on A with `horizon` rounds. Adam plays any
/// bit; Eve's menu is ∅ and the natural covers of A (level-k words of A
/// through ξ, legal, k ≤ max_length): only the least such cover before the
/// last round, all of them at the last round. Leaves are labeled by the
/// payoff status, pending counting for Adam.
inline GameNode<NullMove> null_surrogate_tree(const TreeAutomaton& a, std::size_t horizon, std::size_t max_length) {
  std::vector<NullMove> play;
  std::function<void(GameNode<NullMove>&)> grow = [&](GameNode<NullMove>& node) {
    std::size_t n = round_of(play.size());
    if (play.size() == 2 * horizon) {
      node.winner = null_payoff_status(play, a).status == NullStatus::adam_pending ? Player::adam : Player::eve;
      return;
    }
    std::vector<NullMove> options;
    if (to_move(play.size()) == Player::adam) {
      Word at = null_game::last_word(play);
      options = {at.child(0), at.child(1)};
    } else {
      Word xi = null_game::last_word(play);
      options.emplace_back(ClopenSet());
      int s = a.run(xi);
      if (s != TreeAutomaton::none) {
        for (std::size_t k = n; k <= max_length; ++k) {
          if (level_count_from(a, s, k - n) * n >= pow2(k - n)) continue;
          options.emplace_back(ClopenSet(level_words(a, xi, k)));
          if (n < horizon) break;
        }
      }
    }
    for (auto& m : options) {
      node.children.push_back({m, std::nullopt, {}});
      play.push_back(std::move(m));
      grow(node.children.back());
      play.pop_back();
    }
  };
  GameNode<NullMove> root;
  grow(root);
  return root;
}

}  // namespace fusion
