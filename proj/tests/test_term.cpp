#include <gtest/gtest.h>

#include <random>

#include "sosw/dsl.hpp"
#include "sosw/error.hpp"
#include "sosw/harness.hpp"
#include "sosw/term.hpp"

using namespace sosw;

namespace {

Signature small_sig() {
  Signature s;
  s.add({"c", 0});
  s.add({"d", 0});
  s.add({"f", 1});
  s.add({"g", 2});
  return s;
}

Term random_term(std::mt19937& rng, int depth, const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
  switch (pick(rng)) {
    case 0: return Term::var(vars[rng() % vars.size()]);
    case 1: return Term::app(rng() % 2 ? "c" : "d");
    case 2:
    case 3: return Term::app("f", {random_term(rng, depth - 1, vars)});
    default: return Term::app("g", {random_term(rng, depth - 1, vars), random_term(rng, depth - 1, vars)});
  }
}

}  // namespace

TEST(Term, BasicShape) {
  Term t = Term::app("g", {Term::var("x"), Term::app("f", {Term::app("c")})});
  EXPECT_EQ(t.str(), "g(x,f(c))");
  EXPECT_EQ(t.size(), 4u);
  EXPECT_EQ(t.depth(), 2u);
  EXPECT_FALSE(is_closed(t));
  EXPECT_TRUE(is_univariate(t));
  EXPECT_EQ(vars(Term::app("g", {Term::var("y"), Term::var("x")})), (std::vector<std::string>{"y", "x"}));
  EXPECT_EQ(count_occurrences("x", Term::app("g", {Term::var("x"), Term::var("x")})), 2u);
  EXPECT_FALSE(is_univariate(Term::app("g", {Term::var("x"), Term::var("x")})));
}

TEST(Term, InfixParsingAndPrinting) {
  TSS P = load_bundled("bpa");
  Term t = parse_term(P.sig, "a + b . tau");
  EXPECT_EQ(t.str(), "alt(a,seq(b,tau))");
  Term u = parse_term(P.sig, "(a + b) . tau");
  EXPECT_EQ(u.str(), "seq(alt(a,b),tau)");
  // Left associative.
  EXPECT_EQ(parse_term(P.sig, "a . b . tau").str(), "seq(seq(a,b),tau)");
  for (const auto& s : {"a + b . tau", "(a + b) . tau", "a . (b . tau)", "x1 . x2 + x3"}) {
    Term p = parse_term(P.sig, s);
    EXPECT_EQ(parse_term(P.sig, P.sig.print(p)), p) << s;
  }
  EXPECT_THROW(parse_term(P.sig, "x . a", true), Error);
  EXPECT_THROW(parse_term(P.sig, "a +"), ParseError);
}

TEST(Term, SignatureCheck) {
  Signature s = small_sig();
  EXPECT_NO_THROW(s.check(Term::app("f", {Term::var("x")})));
  try {
    s.check(Term::app("f", {Term::var("x"), Term::var("y")}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Arity);
  }
  EXPECT_THROW(s.check(Term::app("h")), Error);
}

// apply(compose(s, r), t) == apply(s, apply(r, t)) on random data.
TEST(Term, ComposeProperty) {
  std::mt19937 rng(7);
  const std::vector<std::string> vs = {"x", "y", "z"};
  for (int i = 0; i < 300; ++i) {
    Term t = random_term(rng, 3, vs);
    Subst s, r;
    for (const auto& v : vs) {
      if (rng() % 2) s[v] = random_term(rng, 2, vs);
      if (rng() % 2) r[v] = random_term(rng, 2, vs);
    }
    EXPECT_EQ(sosw::apply(compose(s, r), t), sosw::apply(s, sosw::apply(r, t)));
  }
}

// Matching a pattern against one of its instances recovers the substitution.
TEST(Term, MatchProperty) {
  std::mt19937 rng(11);
  const std::vector<std::string> vs = {"x", "y"};
  for (int i = 0; i < 300; ++i) {
    Term pat = random_term(rng, 3, vs);
    Subst s;
    for (const auto& v : vs) s[v] = random_term(rng, 2, {"u"});
    Term inst = sosw::apply(s, pat);
    Subst m;
    ASSERT_TRUE(match(pat, inst, m));
    EXPECT_EQ(sosw::apply(m, pat), inst);
    for (const auto& v : vars(pat)) EXPECT_EQ(m.at(v), s.at(v));
  }
  Subst m;
  EXPECT_FALSE(match(Term::app("g", {Term::var("x"), Term::var("x")}),
                     Term::app("g", {Term::app("c"), Term::app("d")}), m));
}

TEST(Term, OccurrenceLiquidity) {
  TSS P = load_bundled("bpa");
  const ArgumentMarking& lambda = P.find_markings("")->lambda;  // seq/1
  Term t = parse_term(P.sig, "(x + y) . z");
  auto ox = occurrence_liquidity(t, "x", lambda);
  ASSERT_EQ(ox.size(), 1u);
  EXPECT_FALSE(ox[0].liquid);  // alt/1 is not lambda-liquid
  EXPECT_EQ(ox[0].path, (Path{1, 1}));
  auto oz = occurrence_liquidity(t, "z", lambda);
  EXPECT_FALSE(oz[0].liquid);
  auto oy = occurrence_liquidity(parse_term(P.sig, "y . z"), "y", lambda);
  EXPECT_TRUE(oy[0].liquid);
}

// Term counts follow N(0) = #constants, N(d) = #constants + sum_f N(d-1)^arity.
TEST(Term, EnumerateCounts) {
  Signature s = small_sig();
  std::size_t n = 2;
  for (int d = 0; d <= 2; ++d) {
    if (d > 0) n = 2 + n + n * n;
    auto ts = enumerate_terms(s, d, {});
    EXPECT_EQ(ts.size(), n) << "depth " << d;
    std::set<Term> uniq(ts.begin(), ts.end());
    EXPECT_EQ(uniq.size(), ts.size());
    for (const auto& t : ts) EXPECT_LE(static_cast<int>(t.depth()), d);
  }
}

TEST(Term, FreshVariablesAvoid) {
  auto fs = fresh_variables({"z0", "z2"}, 3);
  EXPECT_EQ(fs, (std::vector<std::string>{"z1", "z3", "z4"}));
}

TEST(Term, MarkingOperations) {
  ArgumentMarking a{"a", {{"f", 1}, {"g", 1}}}, b{"b", {{"g", 1}, {"g", 2}}};
  EXPECT_EQ(a.intersect(b).liquid, (std::set<std::pair<std::string, int>>{{"g", 1}}));
  EXPECT_TRUE(a.intersect(b).subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
  EXPECT_EQ(ArgumentMarking::universal(small_sig()).liquid.size(), 3u);
}
