#include <gtest/gtest.h>

#include <random>

#include "sosw/equiv.hpp"
#include "sosw/error.hpp"
#include "sosw/lts.hpp"
#include "sosw/modal.hpp"

using namespace sosw;

namespace {

Formula random_formula(std::mt19937& rng, int depth) {
  static const std::vector<std::string> labels = {"a0", "a1", "tau"};
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 0);
  switch (pick(rng)) {
    case 0: return Formula::top();
    case 1: return Formula::neg(random_formula(rng, depth - 1));
    case 2: return Formula::diamond(labels[rng() % labels.size()], random_formula(rng, depth - 1));
    case 3: return Formula::eps(random_formula(rng, depth - 1));
    default: return Formula::conj({random_formula(rng, depth - 1), random_formula(rng, depth - 1)});
  }
}

// Set-based evaluation straight from the satisfaction clauses.
bool naive_sat(const LTS& L, int s, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Conj:
      for (const auto& k : f.kids())
        if (!naive_sat(L, s, k)) return false;
      return true;
    case Formula::Kind::Neg: return !naive_sat(L, s, f.sub());
    case Formula::Kind::Diamond:
      for (const auto& [l, t] : L.out(s))
        if (l == f.label() && naive_sat(L, t, f.sub())) return true;
      return false;
    case Formula::Kind::Eps: {
      std::set<int> seen{s};
      std::vector<int> todo{s};
      while (!todo.empty()) {
        int u = todo.back();
        todo.pop_back();
        if (naive_sat(L, u, f.sub())) return true;
        for (const auto& [l, v] : L.out(u))
          if (l == kTau && seen.insert(v).second) todo.push_back(v);
      }
      return false;
    }
  }
  return false;
}

}  // namespace

TEST(Modal, ParsePrintRoundTrip) {
  std::mt19937 rng(3);
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 4);
    EXPECT_EQ(parse_formula(f.str()).str(), f.str());
  }
  EXPECT_EQ(parse_formula("<eps><a>~/\\[T, <b>T]").str(), "<eps><a>~/\\[T, <b>T]");
  EXPECT_THROW(parse_formula("<a"), ParseError);
  EXPECT_THROW(parse_formula("/\\[T,"), ParseError);
}

TEST(Modal, ClassMembership) {
  auto in = [](const char* s, FormulaClass c) { return in_class(parse_formula(s), c); };
  EXPECT_TRUE(in("<a>T", FormulaClass::O));
  EXPECT_FALSE(in("<a>T", FormulaClass::Od));
  EXPECT_TRUE(in("<eps><a>T", FormulaClass::Od));
  EXPECT_FALSE(in("<eps><a>T", FormulaClass::Ow));
  EXPECT_TRUE(in("<eps><a><eps>T", FormulaClass::Ow));
  EXPECT_FALSE(in("<eps><tau>T", FormulaClass::Od));
  EXPECT_TRUE(in("<eps><tau>T", FormulaClass::Ord));
  EXPECT_TRUE(in("<eps><tau><eps>T", FormulaClass::Orw));
  EXPECT_FALSE(in("<eps><a><eps><tau>T", FormulaClass::Ord));  // tau diamond only at the root
  EXPECT_TRUE(in("/\\[~<eps><tau>T, <eps><a>~<eps><b>T]", FormulaClass::Ord));
  EXPECT_TRUE(in("<eps>~<eps><a>T", FormulaClass::Od));
  EXPECT_EQ(class_for({EquivKind::Weak, true}), FormulaClass::Orw);
  EXPECT_EQ(parse_class("Od"), FormulaClass::Od);
  EXPECT_FALSE(parse_class("Ox").has_value());
}

// Every O_d formula is an O_rd formula, and every O_w formula an O_rw one.
TEST(Modal, ClassInclusionProperty) {
  std::mt19937 rng(5);
  for (int i = 0; i < 3000; ++i) {
    Formula f = random_formula(rng, 5);
    if (in_class(f, FormulaClass::Od)) EXPECT_TRUE(in_class(f, FormulaClass::Ord)) << f.str();
    if (in_class(f, FormulaClass::Ow)) EXPECT_TRUE(in_class(f, FormulaClass::Orw)) << f.str();
  }
}

TEST(Modal, ModelCheckerAgreesWithNaive) {
  std::mt19937 rng(9);
  for (int seed = 0; seed < 60; ++seed) {
    LTS L = random_lts(seed, 8, 2);
    ModelChecker mc(L);
    for (int i = 0; i < 40; ++i) {
      Formula f = random_formula(rng, 4);
      for (std::size_t s = 0; s < L.size(); ++s)
        ASSERT_EQ(mc.satisfies(s, f), naive_sat(L, s, f)) << f.str() << " seed " << seed;
    }
  }
}

// normalize is idempotent and preserves satisfaction.
TEST(Modal, NormalizeProperty) {
  std::mt19937 rng(13);
  for (int seed = 0; seed < 40; ++seed) {
    LTS L = random_lts(seed, 8, 2);
    ModelChecker mc(L);
    for (int i = 0; i < 40; ++i) {
      Formula f = random_formula(rng, 5);
      Formula g = normalize(f);
      EXPECT_EQ(normalize(g).str(), g.str());
      EXPECT_LE(g.size(), f.size());
      EXPECT_EQ(mc.eval(f), mc.eval(g)) << f.str() << " vs " << g.str();
    }
  }
  EXPECT_EQ(normalize(parse_formula("<eps><eps>~~/\\[T, /\\[<a>T]]")).str(), "<eps><a>T");
}

TEST(Modal, DistinguishingFormulaProperty) {
  for (int seed = 0; seed < 80; ++seed) {
    LTS L = random_lts(3000 + seed, 9, 2);
    ModelChecker mc(L);
    for (FormulaClass c : {FormulaClass::O, FormulaClass::Od, FormulaClass::Ord, FormulaClass::Ow, FormulaClass::Orw}) {
      Partition part = c == FormulaClass::O ? bisimilarity(L, EquivKind::Strong)
                       : c == FormulaClass::Od ? bisimilarity(L, EquivKind::Delay)
                       : c == FormulaClass::Ow ? bisimilarity(L, EquivKind::Weak)
                                               : equivalence(L, {c == FormulaClass::Ord ? EquivKind::Delay
                                                                                         : EquivKind::Weak,
                                                                 true});
      for (std::size_t p = 0; p < L.size(); ++p)
        for (std::size_t q = 0; q < L.size(); ++q) {
          auto f = distinguishing_formula(L, p, q, c);
          ASSERT_EQ(!f.has_value(), part.same(p, q));
          if (!f) continue;
          EXPECT_TRUE(in_class(*f, c)) << f->str();
          EXPECT_TRUE(mc.satisfies(p, *f));
          EXPECT_FALSE(mc.satisfies(q, *f));
        }
    }
  }
}

TEST(Modal, KnownWitness) {
  // tau.a against a: rooted delay inequivalent, distinguished by a tau-diamond.
  LTS L = read_aut("des (0, 3, 4)\n(0, \"tau\", 1)\n(1, \"a\", 3)\n(2, \"a\", 3)\n");
  auto f = distinguishing_formula(L, 0, 2, FormulaClass::Ord);
  ASSERT_TRUE(f.has_value());
  EXPECT_TRUE(satisfies(L, 0, *f));
  EXPECT_FALSE(satisfies(L, 2, *f));
  EXPECT_FALSE(distinguishing_formula(L, 0, 2, FormulaClass::Od).has_value());
}
