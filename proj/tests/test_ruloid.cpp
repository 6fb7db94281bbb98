#include <gtest/gtest.h>

#include "sosw/dsl.hpp"
#include "sosw/harness.hpp"
#include "sosw/prover.hpp"
#include "sosw/ruloid.hpp"

using namespace sosw;

namespace {

std::set<std::string> shapes(const TSS& P, const RuloidSet& rs) {
  std::set<std::string> out;
  for (const auto& r : rs.ruloids) out.insert(print_rule(P.sig, canonical_ruloid(r.rule)));
  return out;
}

std::string canon(const TSS& P, const std::string& rule) {
  return print_rule(P.sig, canonical_ruloid(parse_rule(P, rule)));
}

}  // namespace

TEST(Ruloid, SequentialComposition) {
  TSS P = load_bundled("bpa");
  RuloidEngine E(P);
  RuloidSet rs = E.ruloids(parse_term(P.sig, "x1 . x2"), "a");
  EXPECT_FALSE(rs.partial);
  EXPECT_EQ(shapes(P, rs), (std::set<std::string>{canon(P, "x1 -a-> y1 |- x1 . x2 -a-> y1 . x2"),
                                                  canon(P, "x1 -ok-> y1, x2 -a-> y2 |- x1 . x2 -a-> y2")}));
  for (const auto& r : rs.ruloids) EXPECT_TRUE(r.linear);
}

TEST(Ruloid, NestedSource) {
  TSS P = load_bundled("bpa");
  RuloidEngine E(P);
  // (x1 + x2) . x3 -a->: either summand moves, or either terminates and x3 moves.
  RuloidSet rs = E.ruloids(parse_term(P.sig, "(x1 + x2) . x3"), "a");
  EXPECT_EQ(rs.ruloids.size(), 4u);
  // a . x has exactly the axiom instance.
  RuloidSet ax = E.ruloids(parse_term(P.sig, "a . x"), "a");
  EXPECT_EQ(shapes(P, ax), (std::set<std::string>{canon(P, "a . x -a-> eps . x")}));
  EXPECT_TRUE(E.ruloids(parse_term(P.sig, "delta . x"), "a").ruloids.empty());
}

TEST(Ruloid, NegativeRuloids) {
  TSS P = load_bundled("bpa");
  RuloidEngine E(P);
  RuloidSet rs = E.negative_ruloids(parse_term(P.sig, "x1 + x2"), "a");
  EXPECT_EQ(shapes(P, rs), (std::set<std::string>{canon(P, "x1 -a!->, x2 -a!-> |- x1 + x2 -a!->")}));
}

TEST(Ruloid, PriorityNegativePremises) {
  TSS P = load_bundled("priority");
  RuloidEngine E(P);
  RuloidSet rs = E.ruloids(parse_term(P.sig, "theta(x)"), "a");
  EXPECT_EQ(shapes(P, rs), (std::set<std::string>{canon(P, "x -a-> y, x -b!->, x -tau!-> |- theta(x) -a-> y")}));
}

// Two tests of the same premise: one linear proof with duplicated premises
// and its non-linear merge.
TEST(Ruloid, LinearityTags) {
  TSS P = load_bundled("linearity");
  RuloidEngine E(P);
  RuloidSet rs = E.ruloids(parse_term(P.sig, "g(f(x))"), "d");
  ASSERT_EQ(rs.ruloids.size(), 2u);
  for (const auto& r : rs.ruloids) {
    auto pos = r.rule.positive_premises();
    if (pos.size() == 2)
      EXPECT_TRUE(r.linear);
    else {
      EXPECT_EQ(pos.size(), 1u);
      EXPECT_FALSE(r.linear);
    }
    EXPECT_EQ(r.rule.conclusion.rhs, parse_term(P.sig, "f(x)"));
  }
  RuloidSet lin = E.linear_ruloids(parse_term(P.sig, "g(f(x))"), "d");
  ASSERT_EQ(lin.ruloids.size(), 1u);
  EXPECT_EQ(lin.ruloids[0].rule.positive_premises().size(), 2u);
}

TEST(Ruloid, ProofsUseEveryPremise) {
  TSS P = load_bundled("bpa");
  RuloidEngine E(P);
  for (const auto& t : open_terms(P.sig, 2))
    for (const auto& l : P.labels())
      for (const auto& r : E.linear_ruloids(t, l).ruloids) {
        auto hyps = r.proof.hypotheses();
        std::set<Literal> hs(hyps.begin(), hyps.end());
        std::set<Literal> ps(r.rule.premises.begin(), r.rule.premises.end());
        EXPECT_EQ(hs, ps) << print_rule(P.sig, r.rule);
        EXPECT_TRUE(classify(r.rule).decent) << print_rule(P.sig, r.rule);
      }
}

TEST(Ruloid, CanonicalIsIdempotent) {
  TSS P = load_bundled("kleene");
  RuloidEngine E(P);
  for (const auto& t : open_terms(P.sig, 1))
    for (const auto& r : E.ruloids(t, "a").ruloids) {
      Rule c = canonical_ruloid(r.rule);
      EXPECT_TRUE(canonical_ruloid(c).same_shape(c));
    }
}

// Both directions of the correspondence over a small universe.
TEST(Ruloid, CorrespondenceProperty) {
  for (const char* spec : {"bpa", "priority", "deadlock", "linearity", "counter_eta"}) {
    TSS P = load_bundled(spec);
    std::vector<Term> universe = P.base;
    if (universe.size() > 4) universe.resize(4);
    auto src = open_terms(P.sig, 1);
    CorrespondenceReport rep = check_ruloid_correspondence(P, src, universe);
    EXPECT_TRUE(rep.ok()) << spec << ": " << (rep.discrepancies.empty() ? "" : rep.discrepancies[0]);
    EXPECT_GT(rep.instances, 0u);
  }
}

TEST(Prover, LinearProvability) {
  TSS P = load_bundled("linearity");
  EXPECT_TRUE(linearly_provable(parse_rule(P, "x -a-> y1, x -a-> y2 |- g(f(x)) -d-> f(x)"), P.rules, 6));
  EXPECT_FALSE(linearly_provable(parse_rule(P, "x -a-> y1 |- g(f(x)) -d-> f(x)"), P.rules, 6));
}

TEST(Prover, GammaPatience) {
  TSS P = load_bundled("bpa");
  ArgumentMarking gamma = P.find_markings("")->gamma();  // seq/1
  EXPECT_TRUE(is_gamma_patient_rule(parse_rule(P, "x1 -tau-> y |- x1 . x2 -tau-> y . x2"), gamma));
  EXPECT_FALSE(is_gamma_patient_rule(parse_rule(P, "x1 -tau-> y |- x1 + x2 -tau-> y"), gamma));
}
