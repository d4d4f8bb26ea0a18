#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "support/generators.hpp"

using namespace fusion;
using namespace fusion::testing;

namespace {

SouslinScheme ones_scheme() {
  return {4, [](const SchemeNode& node) { return ClopenSet::cylinder(Word::repeat(1, node.size())); }};
}

SouslinScheme zeros_scheme() {
  return {2, [](const SchemeNode& node) { return ClopenSet::cylinder(Word::repeat(0, node.size())); }};
}

}  // namespace

TEST(ClosedCode, Examples) {
  ClosedCode ones{[](const Word& w) { return !w.empty() && w.bit(0) == 1; }};
  EXPECT_FALSE(closed_code_validate(ones, 5));

  ClosedCode broken{[](const Word& w) { return w == Word("10") || w == Word("11"); }};
  auto v = closed_code_validate(broken, 3);
  ASSERT_TRUE(v);
  EXPECT_NE(v->detail.find("\"1\""), std::string::npos);

  ClosedCode none{[](const Word&) { return false; }};
  EXPECT_FALSE(closed_code_validate(none, 4));
}

TEST(ClosedCode, CodesOfAutomataSatisfyClosure) {
  for (const auto& t : random_corpus(4, 30, 5)) EXPECT_FALSE(closed_code_validate(ClosedCode::of(t), 6));
  auto half = ClosedCode::of(zoo::half()).enumerate(2);
  EXPECT_EQ(half, (std::vector<Word>{"1", "10", "11"}));
}

TEST(Scheme, ValidExamples) {
  EXPECT_FALSE(scheme_validate(zeros_scheme(), 6));
  EXPECT_FALSE(scheme_validate(ones_scheme(), 4));
  EXPECT_FALSE(scheme_validate(bounded_baire_scheme(), 3));
  EXPECT_FALSE(scheme_validate(breadth_first_scheme(), 3));
}

TEST(Scheme, ShortChildViolates) {
  auto s = materialized_scheme({{"", ClopenSet::whole()}, {"0", ClopenSet({"0"})}, {"00", ClopenSet({"0"})}}, 2);
  auto v = scheme_validate(s, 2);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->clause, "(i)");
  auto out = materialized_scheme({{"", ClopenSet::whole()}, {"0", ClopenSet({"1"})}, {"00", ClopenSet({"10"})},
                                  {"01", ClopenSet({"00"})}},
                                 2);
  auto w = scheme_validate(out, 2);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->clause, "(ii)");
  EXPECT_NE(w->detail.find("\"01\""), std::string::npos);
}

TEST(Scheme, DeadEndViolates) {
  auto s = materialized_scheme({{"", ClopenSet::whole()}, {"1", ClopenSet({"1"})}}, 2);
  auto v = scheme_validate(s, 2);
  ASSERT_TRUE(v);
  EXPECT_EQ(v->clause, "(iii)");
  EXPECT_NE(v->detail.find("\"1\""), std::string::npos);
  EXPECT_FALSE(scheme_validate(s, 1));
}

TEST(Scheme, MeetsOpen) {
  for (std::size_t d = 0; d <= 4; ++d) EXPECT_FALSE(meets_open(ones_scheme(), ClopenSet({"0"}), d).yes);
  auto r = meets_open(ones_scheme(), ClopenSet({"1"}), 3);
  ASSERT_TRUE(r.yes);
  EXPECT_EQ(r.witness->size(), 1u);
  EXPECT_FALSE(meets_open(breadth_first_scheme(), ClopenSet(), 3).yes);
}

TEST(Scheme, MeetsOpenMonotone) {
  auto s = bounded_baire_scheme(3);
  std::vector<ClopenSet> us{ClopenSet({"001"}), ClopenSet({"00"}), ClopenSet({"0"})};
  for (std::size_t i = 0; i < us.size(); ++i)
    for (std::size_t d = 0; d <= 3; ++d) {
      auto r = meets_open(s, us[i], d);
      if (r.yes) {
        ClopenSet v = s.value(*r.witness);
        EXPECT_FALSE(v.empty());
        EXPECT_TRUE(clopen_subset(v, us[i]));
        EXPECT_TRUE(meets_open(s, us[i], d + 1).yes);
        if (i + 1 < us.size()) { EXPECT_TRUE(meets_open(s, us[i + 1], d).yes); }
      }
    }
}

TEST(Scheme, ClosureApprox) {
  auto half = gdelta_from_removal(zoo::half(), {});
  EXPECT_EQ(closure_approx(half, 4), ClopenSet({"0"}));
  EXPECT_EQ(closure_approx(ones_scheme(), 3), ClopenSet({"111"}));
  EXPECT_EQ(closure_approx(breadth_first_scheme(), 1), ClopenSet::whole());
  auto s = bounded_baire_scheme(3);
  for (std::size_t d = 0; d < 4; ++d) EXPECT_TRUE(clopen_subset(closure_approx(s, d + 1), closure_approx(s, d)));
}

TEST(Scheme, FromRemoval) {
  auto s = gdelta_from_removal(zoo::full(), {"0"});
  EXPECT_FALSE(scheme_validate(s, 4));
  EXPECT_EQ(closure_approx(s, 3), ClopenSet({"1"}));
  EXPECT_EQ(closure_approx(gdelta_from_removal(zoo::half(), {}), 2), ClopenSet({"0"}));
}

TEST(Scheme, FromRemovalSpine) {
  // removing [0], [10], …, [1^(d-1)0] leaves the cylinder [1^d]
  for (std::size_t d = 1; d <= 5; ++d) {
    std::vector<Word> spine;
    for (std::size_t i = 0; i < d; ++i) spine.push_back(Word::repeat(1, i).child(0));
    auto s = gdelta_from_removal(zoo::full(), spine);
    EXPECT_FALSE(scheme_validate(s, d + 2));
    EXPECT_EQ(closure_approx(s, d + 2), ClopenSet({Word::repeat(1, d)}));
  }
}

TEST(Scheme, FromRemovalRandomIsValid) {
  Rng rng(2);
  for (const auto& t : random_corpus(6, 20, 4)) {
    std::vector<Word> removed;
    for (const auto& w : level_words(t, "", 3))
      if (rng() % 3 == 0) removed.push_back(w);
    EXPECT_FALSE(scheme_validate(gdelta_from_removal(t, removed), 5));
  }
}

TEST(Scheme, JsonRoundTrip) {
  auto s = bounded_baire_scheme(2);
  auto j = scheme_json(s, 2);
  auto back = parse_scheme_json(j);
  EXPECT_EQ(back.width, 2u);
  for (std::size_t n = 0; n <= 2; ++n)
    for (const auto& node : s.level(n)) EXPECT_EQ(back.value(node), s.value(node)) << node;
  EXPECT_THROW(parse_scheme_json(nlohmann::json::parse(R"({"width":2,"nodes":[{"node":"2","words":[]}]})")),
               ParseError);
}

TEST(Scheme, SpineFixture) {
  std::ifstream in(std::string(FUSION_SOURCE_DIR) + "/fixtures/spine_scheme.json");
  std::stringstream ss;
  ss << in.rdbuf();
  auto s = parse_scheme_json(nlohmann::json::parse(ss.str()));
  EXPECT_FALSE(scheme_validate(s, 3));
  EXPECT_EQ(closure_approx(s, 3), ClopenSet({"111"}));
  EXPECT_TRUE(scheme_validate(s, 4));
}
