#pragma once

// Generic two-player game machinery. Adam moves first; moves are numbered
// from 1, so play index i belongs to round i/2 + 1 and Adam owns the even
// indices.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fusion/error.hpp"

namespace fusion {

enum class Player { adam, eve };

inline std::string to_string(Player p) { return p == Player::adam ? "Adam" : "Eve"; }
inline Player opponent(Player p) { return p == Player::adam ? Player::eve : Player::adam; }

/// Whose turn it is after `length` moves.
inline Player to_move(std::size_t length) { return length % 2 == 0 ? Player::adam : Player::eve; }
/// Round of the move made after `length` moves.
inline std::size_t round_of(std::size_t length) { return length / 2 + 1; }

class IllegalMove : public Error {
 public:
  IllegalMove(Player player, std::size_t round, Violation v)
      : Error("IllegalMove", to_string(player) + " at round " + std::to_string(round) + " [" + v.clause +
                                 "]: " + v.detail),
        player_(player), round_(round), violation_(std::move(v)) {}

  Player player() const noexcept { return player_; }
  std::size_t round() const noexcept { return round_; }
  const Violation& violation() const noexcept { return violation_; }

 private:
  Player player_;
  std::size_t round_;
  Violation violation_;
};

template <class Move>
using Play = std::vector<Move>;

/// The legality contract. `moves` optionally enumerates a finite menu of
/// legal moves (needed to materialize opponent branching).
template <class Move>
struct GameScheme {
  std::function<CheckResult(std::span<const Move>, const Move&)> check;
  std::function<std::vector<Move>(std::span<const Move>)> moves;

  CheckResult legal(std::span<const Move> prev, const Move& m) const { return check(prev, m); }
};

template <class Move>
using Responder = std::function<Move(std::span<const Move>)>;

/// Continuations after `prefix`, which must be legal and end with an Eve
/// move (even length).
template <class Move>
GameScheme<Move> relativize(const GameScheme<Move>& g, const Play<Move>& prefix) {
  if (prefix.size() % 2 != 0)
    throw IllegalPrefix("prefix of length " + std::to_string(prefix.size()) + " does not end with an Eve move");
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (auto v = g.check(std::span<const Move>(prefix.data(), i), prefix[i]))
      throw IllegalPrefix("move " + std::to_string(i + 1) + " of the prefix is illegal [" + v->clause + "]: " +
                          v->detail);
  auto join = [prefix](std::span<const Move> rest) {
    Play<Move> full = prefix;
    full.insert(full.end(), rest.begin(), rest.end());
    return full;
  };
  GameScheme<Move> out;
  out.check = [g, join](std::span<const Move> prev, const Move& m) { return g.check(join(prev), m); };
  if (g.moves) out.moves = [g, join](std::span<const Move> prev) { return g.moves(join(prev)); };
  return out;
}

/// The alternating play of 2·rounds moves, every move checked.
template <class Move>
Play<Move> simulate(const GameScheme<Move>& g, const Responder<Move>& adam, const Responder<Move>& eve,
                    std::size_t rounds, Play<Move> play = {}) {
  const std::size_t end = play.size() + 2 * rounds;
  while (play.size() < end) {
    Player p = to_move(play.size());
    Move m = p == Player::adam ? adam(play) : eve(play);
    if (auto v = g.check(play, m)) throw IllegalMove(p, round_of(play.size()), *v);
    play.push_back(std::move(m));
  }
  return play;
}

/// Node of an explicit game tree. The root's move is unused; the player to
/// move at a node is determined by its depth. Leaves of solver input carry
/// a winner.
template <class Move>
struct GameNode {
  Move move{};
  std::optional<Player> winner;
  std::vector<GameNode> children;

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& c : children) n += c.size();
    return n;
  }
};

/// A strategy: one child at the owner's turns, all considered opponent moves
/// at the others.
template <class Move>
struct StrategyTree {
  Player owner = Player::eve;
  GameNode<Move> root;
};

template <class Move>
struct Solution {
  Player winner;
  StrategyTree<Move> strategy;
};

namespace detail {
template <class Move>
Player solve_node(const GameNode<Move>& node, std::size_t depth, GameNode<Move>& adam, GameNode<Move>& eve) {
  adam.move = eve.move = node.move;
  adam.winner = eve.winner = node.winner;
  if (node.children.empty()) {
    if (!node.winner) throw BadParams("solve_bounded: unlabeled leaf at depth " + std::to_string(depth));
    return *node.winner;
  }
  const Player mover = to_move(depth);
  std::vector<GameNode<Move>> as, es;
  std::vector<Player> values;
  for (const auto& c : node.children) {
    as.emplace_back();
    es.emplace_back();
    values.push_back(solve_node(c, depth + 1, as.back(), es.back()));
  }
  // the mover keeps a single best child in their own tree
  std::size_t best = 0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == mover) {
      best = i;
      break;
    }
  Player value = values[best];
  if (mover == Player::adam) {
    adam.children = {std::move(as[best])};
    eve.children = std::move(es);
  } else {
    eve.children = {std::move(es[best])};
    adam.children = std::move(as);
  }
  return value;
}
}  // namespace detail

/// Backward induction on a finite tree with labeled leaves.
template <class Move>
Solution<Move> solve_bounded(const GameNode<Move>& tree) {
  GameNode<Move> adam, eve;
  Player w = detail::solve_node(tree, 0, adam, eve);
  return {w, {w, w == Player::adam ? std::move(adam) : std::move(eve)}};
}

/// Follows a strategy tree; throws IllegalStrategy when the play leaves it.
template <class Move>
Responder<Move> responder_from_tree(StrategyTree<Move> s) {
  return [s = std::move(s)](std::span<const Move> play) -> Move {
    const GameNode<Move>* node = &s.root;
    for (const auto& m : play) {
      const GameNode<Move>* next = nullptr;
      for (const auto& c : node->children)
        if (c.move == m) {
          next = &c;
          break;
        }
      if (!next) throw IllegalStrategy("play left the strategy tree at move " + std::to_string(&m - play.data() + 1));
      node = next;
    }
    if (node->children.size() != 1)
      throw IllegalStrategy("strategy tree has no single reply after " + std::to_string(play.size()) + " moves");
    return node->children.front().move;
  };
}

/// Strategy tree of `owner` playing `r` to the given play length, with the
/// opponent ranging over the scheme's move menu.
template <class Move>
StrategyTree<Move> materialize(const GameScheme<Move>& g, const Responder<Move>& r, Player owner,
                               std::size_t depth) {
  if (!g.moves) throw BadParams("materialize: the scheme has no move menu");
  StrategyTree<Move> out{owner, {}};
  Play<Move> play;
  std::function<void(GameNode<Move>&)> grow = [&](GameNode<Move>& node) {
    if (play.size() >= depth) return;
    Player p = to_move(play.size());
    std::vector<Move> options;
    if (p == owner)
      options = {r(play)};
    else
      options = g.moves(play);
    for (auto& m : options) {
      if (auto v = g.check(play, m)) throw IllegalMove(p, round_of(play.size()), *v);
      node.children.push_back({m, std::nullopt, {}});
      play.push_back(std::move(m));
      grow(node.children.back());
      play.pop_back();
    }
  };
  grow(out.root);
  return out;
}

template <class Move>
using Front = std::vector<Play<Move>>;

/// Every root-to-leaf path of the tree, as move sequences.
template <class Move>
std::vector<Play<Move>> branches(const GameNode<Move>& root) {
  std::vector<Play<Move>> out;
  Play<Move> path;
  std::function<void(const GameNode<Move>&)> walk = [&](const GameNode<Move>& n) {
    if (n.children.empty()) {
      out.push_back(path);
      return;
    }
    for (const auto& c : n.children) {
      path.push_back(c.move);
      walk(c);
      path.pop_back();
    }
  };
  walk(root);
  return out;
}

namespace detail {
template <class Move>
bool is_prefix(const Play<Move>& a, const Play<Move>& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}
}  // namespace detail

/// Antichain, and every maximal branch of the materialized tree passes
/// through it.
template <class Move>
bool check_front(const GameNode<Move>& tree, const Front<Move>& front) {
  for (std::size_t i = 0; i < front.size(); ++i)
    for (std::size_t j = 0; j < front.size(); ++j)
      if (i != j && detail::is_prefix(front[i], front[j])) return false;
  for (const auto& b : branches(tree)) {
    bool hit = false;
    for (const auto& f : front) hit = hit || detail::is_prefix(f, b);
    if (!hit) return false;
  }
  return true;
}

/// Minimal even-length nodes (the root included) satisfying a monotone
/// condition. Throws ConditionNotMet naming the first branch that exhausts
/// the tree without it.
template <class Move>
Front<Move> extract_front(const StrategyTree<Move>& s, const std::function<bool(std::span<const Move>)>& condition,
                          const std::function<std::string(const Play<Move>&)>& describe = {}) {
  Front<Move> out;
  Play<Move> path;
  std::function<void(const GameNode<Move>&)> walk = [&](const GameNode<Move>& n) {
    if (path.size() % 2 == 0 && condition(path)) {
      out.push_back(path);
      return;
    }
    if (n.children.empty())
      throw ConditionNotMet("condition never holds along the branch of length " + std::to_string(path.size()) +
                            (describe ? ": " + describe(path) : std::string()));
    for (const auto& c : n.children) {
      path.push_back(c.move);
      walk(c);
      path.pop_back();
    }
  };
  walk(s.root);
  return out;
}

// Play traces: one JSON object per move, {round, player, move}.

template <class Move>
nlohmann::json trace_json(const Play<Move>& play) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t i = 0; i < play.size(); ++i)
    out.push_back({{"round", round_of(i)}, {"player", to_string(to_move(i))}, {"move", play[i]}});
  return out;
}

template <class Move>
std::string trace_jsonl(const Play<Move>& play) {
  std::string out;
  for (const auto& line : trace_json(play)) out += line.dump() + "\n";
  return out;
}

/// Parses a JSONL trace; round and player fields are checked against the
/// position of each line.
template <class Move>
Play<Move> parse_trace_jsonl(const std::string& text) {
  Play<Move> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(pos, end - pos);
    pos = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
      if (j.at("round").get<std::size_t>() != round_of(out.size()) ||
          j.at("player").get<std::string>() != to_string(to_move(out.size())))
        throw ParseError("trace line " + std::to_string(out.size() + 1) + " is out of turn order");
      out.push_back(j.at("move").get<Move>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("trace line " + std::to_string(out.size() + 1) + ": " + e.what());
    }
  }
  return out;
}

template <class Move>
nlohmann::json tree_json(const GameNode<Move>& n) {
  nlohmann::json j = nlohmann::json::object();
  j["move"] = n.move;
  if (n.winner) j["winner"] = to_string(*n.winner);
  if (!n.children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& c : n.children) j["children"].push_back(tree_json(c));
  }
  return j;
}

}  // namespace fusion
