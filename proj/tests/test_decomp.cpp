#include <gtest/gtest.h>

#include "sosw/decomp.hpp"
#include "sosw/dsl.hpp"
#include "sosw/error.hpp"
#include "sosw/harness.hpp"

using namespace sosw;

namespace {

std::set<std::string> strs(const std::vector<Mapping>& ms) {
  std::set<std::string> out;
  for (const auto& m : ms) out.insert(m.str());
  return out;
}

std::vector<Formula> parse_all(const std::vector<std::string>& src) {
  std::vector<Formula> out;
  for (const auto& s : src) out.push_back(parse_formula(s));
  return out;
}

std::vector<Term> closed(const TSS& P, const std::vector<std::string>& src) {
  std::vector<Term> out;
  for (const auto& s : src) out.push_back(parse_term(P.sig, s, true));
  return out;
}

}  // namespace

TEST(Decomp, DiamondThroughSequence) {
  TSS P = load_bundled("bpa");
  ArgumentMarking gamma = P.find_markings("")->gamma();
  auto ms = decompose(P, parse_term(P.sig, "x1 . x2"), parse_formula("<a>T"), gamma);
  EXPECT_EQ(strs(ms), (std::set<std::string>{"{x1: <a>T}", "{x1: <ok>T, x2: <a>T}"}));
}

TEST(Decomp, NegationAsHittingSets) {
  TSS P = load_bundled("bpa");
  ArgumentMarking gamma = P.find_markings("")->gamma();
  auto ms = decompose(P, parse_term(P.sig, "x1 . x2"), parse_formula("~<b>T"), gamma);
  EXPECT_EQ(strs(ms), (std::set<std::string>{"{x1: /\\[~<b>T, ~<ok>T]}", "{x1: ~<b>T, x2: ~<b>T}"}));
}

TEST(Decomp, TopAndVariable) {
  TSS P = load_bundled("bpa");
  ArgumentMarking gamma = P.find_markings("")->gamma();
  EXPECT_EQ(strs(decompose(P, parse_term(P.sig, "x1 + x2"), Formula::top(), gamma)),
            (std::set<std::string>{"{}"}));
  EXPECT_EQ(strs(decompose(P, parse_term(P.sig, "x"), parse_formula("<a>T"), gamma)),
            (std::set<std::string>{"{x: <a>T}"}));
  EXPECT_TRUE(decompose(P, parse_term(P.sig, "delta . x"), parse_formula("<a>T"), gamma).empty());
}

TEST(Decomp, DelayResistantStar) {
  TSS P = load_bundled("kleene");
  ArgumentMarking gamma = P.find_markings("")->gamma();
  auto ms = decompose_dr(P, parse_term(P.sig, "x1 * x2"), parse_formula("<eps><a>T"), gamma);
  EXPECT_EQ(ms.size(), 4u);
  for (const auto& m : ms) EXPECT_EQ(m.psi.size(), 1u) << m.str();
}

// Strong formulas under the plain decomposition on BPA open terms.
TEST(Decomp, TheoremStrong) {
  TSS P = load_bundled("bpa");
  auto terms = open_terms(P.sig, 1);
  auto fs = parse_all({"<a>T", "~<b>T", "<tau><a>T", "/\\[<a>T, ~<ok>T]", "<ok>~<ok>T"});
  auto base = closed(P, {"eps", "delta", "tau . a", "a + b"});
  TheoremReport rep = verify_decomposition_theorem(P, terms, fs, base, P.find_markings("")->gamma());
  EXPECT_TRUE(rep.ok()) << rep.mismatches.size();
  EXPECT_GT(rep.checks, 0u);
}

TEST(Decomp, TheoremDelayResistantKleene) {
  TSS P = load_bundled("kleene");
  auto terms = open_terms(P.sig, 1);
  auto fs = parse_all({"<eps><a>T", "~<eps><b>T", "<eps><tau>T", "<eps><a>~<eps><ok>T"});
  auto base = closed(P, {"eps", "delta", "tau . a", "a * b"});
  DecompOptions o;
  o.delay_resistant = true;
  TheoremReport rep = verify_decomposition_theorem(P, terms, fs, base, P.find_markings("")->gamma(), o);
  EXPECT_TRUE(rep.ok()) << rep.mismatches.size();
}

// Dropping the epsilon prefix in the refined case must be observable.
TEST(Decomp, MutationDetected) {
  TSS P = load_bundled("bpa");
  auto terms = open_terms(P.sig, 1);
  auto fs = parse_all({"<eps><a>T", "<eps>~<eps><b>T"});
  auto base = closed(P, {"eps", "delta", "tau . a", "(tau . eps) + b"});
  DecompOptions o;
  o.delay_resistant = true;
  o.mutate_drop_eps = true;
  TheoremReport rep = verify_decomposition_theorem(P, terms, fs, base, P.find_markings("")->gamma(), o);
  EXPECT_FALSE(rep.ok());
}

TEST(Decomp, ClassPreservation) {
  TSS P = load_bundled("bpa");
  auto terms = open_terms(P.sig, 1);
  auto fs = parse_all({"<eps><a>T", "~<eps><tau>T", "<eps><a>~<eps><b>T"});
  DecompOptions o;
  o.delay_resistant = true;
  PreservationReport rep = verify_class_preservation(P, *P.find_markings(""), terms, fs, FormulaClass::Ord, 30, 7, o);
  EXPECT_TRUE(rep.ok()) << (rep.violations.empty() ? "" : rep.violations[0]);
  EXPECT_GT(rep.formulas_checked, 0u);
}

TEST(Decomp, NegationCap) {
  TSS P = load_bundled("bpa");
  DecompOptions o;
  o.negation_cap = 1;
  try {
    decompose(P, parse_term(P.sig, "(x1 + x2) . (x3 + x4)"), parse_formula("~<a>T"), P.find_markings("")->gamma(), o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}
