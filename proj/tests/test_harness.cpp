#include <gtest/gtest.h>

#include "sosw/dsl.hpp"
#include "sosw/error.hpp"
#include "sosw/harness.hpp"

using namespace sosw;

TEST(Harness, ContextCount) {
  TSS P = load_bundled("bpa");
  std::vector<Term> leaves = {parse_term(P.sig, "a", true), parse_term(P.sig, "eps", true)};
  auto cs = univariate_contexts(P.sig, 1, leaves);
  // each binary operator with the hole on either side; the other argument
  // ranges over the constants, which already include the given leaves
  std::set<Term> uniq(cs.begin(), cs.end());
  EXPECT_EQ(uniq.size(), cs.size());
  for (const auto& c : cs) EXPECT_TRUE(is_univariate(c));
  EXPECT_EQ(cs.size(), 4 * P.sig.constants().size());
}

TEST(Harness, OpenTerms) {
  TSS P = load_bundled("bpa");
  auto ts = open_terms(P.sig, 2);
  EXPECT_EQ(ts.size(), 19u);
  for (const auto& t : ts) {
    for (const auto& v : vars(t)) EXPECT_EQ(count_occurrences(v, t), 1u) << P.sig.print(t);
  }
}

TEST(Harness, CounterexampleViolation) {
  TSS P = load_bundled("counter_negative");
  CongruenceReport rep = congruence_check(P, {EquivKind::Delay, true}, 1, P.base);
  ASSERT_FALSE(rep.clean());
  bool found = false;
  for (const auto& v : rep.violations) {
    EXPECT_TRUE(v.witness_verified);
    if (P.sig.print(v.context) == "f(x)") found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Harness, CleanForFormatCompliant) {
  TSS P = load_bundled("bpa");
  EXPECT_TRUE(congruence_check(P, {EquivKind::Delay, true}, 1, P.base).clean());
}

TEST(Harness, DelayValidation) {
  for (const char* spec : {"counter_negative", "counter_positive"}) {
    TSS P = load_bundled(spec);
    auto rep = validate_delay_resistance(P, open_terms(P.sig, 1), P.base);
    EXPECT_FALSE(rep.ok()) << spec;
  }
  TSS P = load_bundled("bpa");
  EXPECT_TRUE(validate_delay_resistance(P, open_terms(P.sig, 1), P.base).ok());
}

TEST(Harness, BundledSuite) {
  SuiteSummary s = run_bundled_suite();
  for (const auto& i : s.items) EXPECT_TRUE(i.ok) << i.spec << " " << i.expectation << ": " << i.detail;
  EXPECT_TRUE(s.ok());
  EXPECT_EQ(bundled_specs().size(), 11u);
}

TEST(Harness, UnknownBundled) {
  try {
    load_bundled("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
}
