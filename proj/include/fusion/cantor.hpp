#pragma once

// Finite binary words, cylinders and clopen subsets of Cantor space, with
// exact Haar measure.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "fusion/error.hpp"

namespace fusion {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(std::size_t n) { return BigInt(1) << n; }

/// "p/q", or just "p" when the denominator is 1.
inline std::string to_string(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

/// A finite binary word. Stored as an ASCII string of '0'/'1', which is also
/// its serialized form.
class Word {
 public:
  Word() = default;
  /// Throws ParseError on characters other than '0'/'1'.
  Word(std::string_view bits) : bits_(bits) {  // NOLINT(google-explicit-constructor)
    for (char c : bits_)
      if (c != '0' && c != '1')
        throw ParseError("invalid bit '" + std::string(1, c) + "' in word \"" + bits_ + "\"");
  }
  Word(const char* bits) : Word(std::string_view(bits)) {}  // NOLINT(google-explicit-constructor)

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }
  int bit(std::size_t i) const { return bits_[i] == '1' ? 1 : 0; }
  const std::string& str() const noexcept { return bits_; }

  Word child(int b) const {
    Word w = *this;
    w.bits_.push_back(b ? '1' : '0');
    return w;
  }
  Word prefix(std::size_t n) const {
    Word w;
    w.bits_ = bits_.substr(0, std::min(n, bits_.size()));
    return w;
  }
  Word concat(const Word& other) const {
    Word w = *this;
    w.bits_ += other.bits_;
    return w;
  }
  /// True when this word is a (not necessarily proper) prefix of `other`.
  bool is_prefix_of(const Word& other) const noexcept {
    return bits_.size() <= other.bits_.size() &&
           other.bits_.compare(0, bits_.size(), bits_) == 0;
  }
  bool comparable(const Word& other) const noexcept {
    return is_prefix_of(other) || other.is_prefix_of(*this);
  }

  static Word repeat(int b, std::size_t n) {
    Word w;
    w.bits_.assign(n, b ? '1' : '0');
    return w;
  }

  friend auto operator<=>(const Word&, const Word&) = default;
  friend bool operator==(const Word&, const Word&) = default;

 private:
  std::string bits_;
};

/// Shortest-then-lexicographic order. All "pick the first" choices in the
/// library use it.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// All words of length n in lexicographic order.
inline std::vector<Word> all_words(std::size_t n) {
  std::vector<Word> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
    std::string s(n, '0');
    for (std::size_t j = 0; j < n; ++j)
      if (i >> (n - 1 - j) & 1) s[j] = '1';
    out.emplace_back(s);
  }
  return out;
}

/// A finite union of cylinders, kept in canonical form: the generators are
/// an antichain with no sibling pair, sorted lexicographically. Two clopen
/// sets are equal iff their canonical generator lists are equal.
class ClopenSet {
 public:
  ClopenSet() = default;
  ClopenSet(std::vector<Word> words) : gens_(normalize(std::move(words))) {}  // NOLINT
  ClopenSet(std::initializer_list<Word> words) : ClopenSet(std::vector<Word>(words)) {}

  static ClopenSet whole() { return ClopenSet({Word()}); }
  static ClopenSet cylinder(const Word& w) { return ClopenSet({w}); }

  const std::vector<Word>& generators() const noexcept { return gens_; }
  bool empty() const noexcept { return gens_.empty(); }
  bool is_whole() const noexcept { return gens_.size() == 1 && gens_[0].empty(); }

  std::size_t max_length() const {
    std::size_t m = 0;
    for (const auto& w : gens_) m = std::max(m, w.size());
    return m;
  }

  /// [w] ⊆ this
  bool contains_cylinder(const Word& w) const {
    return std::any_of(gens_.begin(), gens_.end(),
                       [&](const Word& g) { return g.is_prefix_of(w); });
  }
  /// [w] ∩ this ≠ ∅
  bool meets_cylinder(const Word& w) const {
    return std::any_of(gens_.begin(), gens_.end(),
                       [&](const Word& g) { return g.comparable(w); });
  }

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

  /// Canonical antichain with the same union of cylinders.
  static std::vector<Word> normalize(std::vector<Word> words) {
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    std::vector<Word> out;
    canon(Word(), words.begin(), words.end(), out);
    return out;
  }

 private:
  using It = std::vector<Word>::const_iterator;

  // Words in [first,last) all extend `at` and are sorted; appends the
  // canonical generators below `at`.
  static void canon(const Word& at, It first, It last, std::vector<Word>& out) {
    if (first == last) return;
    if (first->size() == at.size()) {  // `at` itself is present
      out.push_back(at);
      return;
    }
    It mid = std::partition_point(first, last, [&](const Word& w) { return w.bit(at.size()) == 0; });
    std::size_t before = out.size();
    canon(at.child(0), first, mid, out);
    bool left_full = out.size() == before + 1 && out.back() == at.child(0);
    std::size_t between = out.size();
    canon(at.child(1), mid, last, out);
    bool right_full = out.size() == between + 1 && out.back() == at.child(1);
    if (left_full && right_full) {
      out.resize(before);
      out.push_back(at);
    }
  }

  std::vector<Word> gens_;
};

namespace detail {
inline void complement_below(const Word& at, const std::vector<Word>& gens, std::vector<Word>& out) {
  bool meets = false;
  for (const auto& g : gens) {
    if (g.is_prefix_of(at)) return;  // [at] fully covered
    if (at.is_prefix_of(g)) meets = true;
  }
  if (!meets) {
    out.push_back(at);
    return;
  }
  complement_below(at.child(0), gens, out);
  complement_below(at.child(1), gens, out);
}
}  // namespace detail

inline ClopenSet clopen_union(const ClopenSet& a, const ClopenSet& b) {
  std::vector<Word> all = a.generators();
  all.insert(all.end(), b.generators().begin(), b.generators().end());
  return ClopenSet(std::move(all));
}

// Both generator lists are sorted antichains, and the extensions of a word
// form a contiguous run after it, so one merge pass suffices.
inline ClopenSet clopen_intersect(const ClopenSet& a, const ClopenSet& b) {
  const auto& x = a.generators();
  const auto& y = b.generators();
  std::vector<Word> out;
  std::size_t i = 0, j = 0;
  while (i < x.size() && j < y.size()) {
    if (x[i].is_prefix_of(y[j]))
      out.push_back(y[j++]);
    else if (y[j].is_prefix_of(x[i]))
      out.push_back(x[i++]);
    else if (x[i] < y[j])
      ++i;
    else
      ++j;
  }
  return ClopenSet(std::move(out));
}

inline ClopenSet clopen_complement(const ClopenSet& a) {
  std::vector<Word> out;
  detail::complement_below(Word(), a.generators(), out);
  return ClopenSet(std::move(out));
}

inline ClopenSet clopen_difference(const ClopenSet& a, const ClopenSet& b) {
  return clopen_intersect(a, clopen_complement(b));
}

inline bool clopen_subset(const ClopenSet& a, const ClopenSet& b) {
  return clopen_intersect(a, b) == a;
}

/// Absolute Haar measure: Σ 2^(−|w|).
inline Rational measure(const ClopenSet& a) {
  const std::size_t top = a.max_length();
  BigInt total = 0;
  for (const auto& w : a.generators()) total += pow2(top - w.size());
  return Rational(total, pow2(top));
}

/// Relative measure μ_[base](a) = μ(a ∩ [base]) / μ([base]).
inline Rational measure(const ClopenSet& a, const Word& base) {
  return measure(clopen_intersect(a, ClopenSet::cylinder(base))) * Rational(pow2(base.size()));
}

// JSON: words are strings, clopen sets are arrays of strings.

inline void to_json(nlohmann::json& j, const Word& w) { j = w.str(); }
inline void from_json(const nlohmann::json& j, Word& w) {
  if (!j.is_string()) throw ParseError("word must be a JSON string");
  w = Word(j.get<std::string>());
}
inline void to_json(nlohmann::json& j, const ClopenSet& c) {
  j = nlohmann::json::array();
  for (const auto& w : c.generators()) j.push_back(w.str());
}
inline void from_json(const nlohmann::json& j, ClopenSet& c) {
  if (!j.is_array()) throw ParseError("clopen set must be a JSON array of words");
  std::vector<Word> words;
  for (const auto& e : j) words.push_back(e.get<Word>());
  c = ClopenSet(std::move(words));
}

}  // namespace fusion
