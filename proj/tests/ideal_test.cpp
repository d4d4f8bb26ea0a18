#include <gtest/gtest.h>

#include "support/generators.hpp"

using namespace fusion;
using namespace fusion::testing;

namespace {

const std::vector<IdealOracle> oracles{e_null, nwd, ctbl};

}  // namespace

TEST(Ideal, ParseNames) {
  EXPECT_EQ(IdealOracle::parse("E"), e_null);
  EXPECT_EQ(IdealOracle::parse("E-null"), e_null);
  EXPECT_EQ(IdealOracle::parse("NWD"), nwd);
  EXPECT_EQ(IdealOracle::parse("CTBL"), ctbl);
  EXPECT_THROW(IdealOracle::parse("K"), ParseError);
  EXPECT_EQ(nwd.name(), "NWD");
}

TEST(Ideal, MemberExamples) {
  EXPECT_TRUE(e_null.member(zoo::av11()));
  EXPECT_FALSE(nwd.member(zoo::mix()));
  EXPECT_TRUE(ctbl.member(zoo::zero()));
  EXPECT_TRUE(nwd.member(zoo::av11()));
  EXPECT_FALSE(ctbl.member(zoo::av11()));
  EXPECT_FALSE(e_null.member(zoo::half()));
  EXPECT_TRUE(nwd.member(TreeAutomaton()));
}

TEST(Ideal, KernelExamples) {
  EXPECT_EQ(kernel(zoo::mix(), e_null), zoo::half());
  EXPECT_TRUE(kernel(zoo::av11(), e_null).empty());
  EXPECT_EQ(kernel(zoo::full(), e_null), zoo::full());
  EXPECT_TRUE(kernel(zoo::comb(), ctbl).empty());
  EXPECT_EQ(kernel(zoo::mix(), ctbl), zoo::half());
}

TEST(Ideal, DichotomyExamples) {
  auto d = dichotomy(e_null, zoo::mix());
  ASSERT_TRUE(std::holds_alternative<PerfectKernel>(d));
  EXPECT_EQ(std::get<PerfectKernel>(d).kernel, zoo::half());

  auto c = dichotomy(ctbl, zoo::comb());
  ASSERT_TRUE(std::holds_alternative<MemberCertificate>(c));
  EXPECT_TRUE(std::get<MemberCertificate>(c).generator);

  auto f = dichotomy(nwd, zoo::full());
  ASSERT_TRUE(std::holds_alternative<PerfectKernel>(f));
  EXPECT_EQ(std::get<PerfectKernel>(f).kernel, zoo::full());

  auto j = dichotomy_json(ctbl, c);
  EXPECT_EQ(j["verdict"], "member");
  EXPECT_EQ(dichotomy_json(nwd, f)["verdict"], "positive");
}

TEST(Ideal, NwdCertificateListsRemovedPieces) {
  auto c = dichotomy(nwd, zoo::av11());
  ASSERT_TRUE(std::holds_alternative<MemberCertificate>(c));
  const auto& cert = std::get<MemberCertificate>(c);
  EXPECT_TRUE(cert.generator);
  ASSERT_FALSE(cert.passes.empty());
  for (const auto& pass : cert.passes)
    for (const auto& piece : pass) EXPECT_TRUE(nwd.member(piece.residual));
}

TEST(Ideal, KernelEmptyIffMember) {
  auto corpus = random_corpus(5, 50, 5);
  for (const auto& [name, t] : zoo::all()) corpus.push_back(t);
  for (const auto& o : oracles)
    for (const auto& t : corpus) {
      TreeAutomaton k = kernel(t, o);
      EXPECT_EQ(k.empty(), o.member(t)) << o.name() << "\n" << format_automaton(t);
      if (!k.empty()) {
        EXPECT_TRUE(is_i_perfect(k, o));
        EXPECT_TRUE(is_subset(k, t));
        EXPECT_EQ(kernel(k, o), k);
      }
    }
}

TEST(Ideal, KernelCylinderTracesArePositive) {
  for (const auto& o : oracles)
    for (const auto& t : random_corpus(8, 30, 5)) {
      TreeAutomaton k = kernel(t, o);
      if (k.empty()) continue;
      for (std::size_t n = 0; n <= 6; ++n)
        for (const auto& w : level_words(k, "", n)) ASSERT_TRUE(o.positive(restrict(k, w))) << w.str();
    }
}

TEST(Ideal, Hereditary) {
  auto corpus = random_corpus(9, 40, 5);
  for (const auto& o : oracles)
    for (std::size_t i = 0; i + 1 < corpus.size(); ++i) {
      TreeAutomaton c = combine(corpus[i], corpus[i + 1], SetOp::intersect);
      if (o.member(corpus[i])) { EXPECT_TRUE(o.member(c)) << o.name(); }
    }
}

TEST(Ideal, PresentationIndependence) {
  // FULL written with two states
  TreeAutomaton t(0, {{1, 0}, {0, 1}});
  for (const auto& o : oracles) EXPECT_EQ(o.member(t), o.member(zoo::full()));
}

TEST(Ideal, EscapePointExamples) {
  EXPECT_EQ(escape_point(zoo::full(), {zoo::comb()}, e_null), (EventuallyPeriodicPoint{"11", "0"}));
  EXPECT_EQ(escape_point(zoo::half(), {zoo::zero()}, e_null), (EventuallyPeriodicPoint{"01", "0"}));
  EXPECT_EQ(escape_point(zoo::full(), {}, e_null), (EventuallyPeriodicPoint{"", "0"}));
}

TEST(Ideal, EscapePointErrors) {
  EXPECT_THROW(escape_point(zoo::av11(), {}, e_null), NotPositive);
  EXPECT_THROW(escape_point(zoo::full(), {zoo::half()}, e_null), NotPositive);
}

TEST(Ideal, EscapePointAvoidsEverySmallSet) {
  Rng rng(12);
  int done = 0;
  for (int i = 0; i < 200 && done < 20; ++i) {
    TreeAutomaton t = random_automaton(rng, 4);
    if (!nwd.positive(t)) continue;
    std::vector<TreeAutomaton> small;
    for (int k = 0; k < 3; ++k) {
      TreeAutomaton s = random_automaton(rng, 4);
      if (nwd.member(s)) small.push_back(s);
    }
    auto x = escape_point(t, small, nwd);
    EXPECT_TRUE(contains_point(t, x));
    for (const auto& s : small) EXPECT_FALSE(contains_point(s, x));
    EXPECT_EQ(escape_point(t, small, nwd), x);
    ++done;
  }
  EXPECT_EQ(done, 20);
}
