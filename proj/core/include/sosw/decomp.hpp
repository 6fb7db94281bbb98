#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sosw/modal.hpp"
#include "sosw/ruloid.hpp"
#include "sosw/tss.hpp"

namespace sosw {

// Variable-to-formula map; variables not listed map to T.
struct Mapping {
  std::map<std::string, Formula> psi;

  Formula at(const std::string& x) const;
  std::string str() const;  // "{x1: <a>T, x2: T}" listing non-T entries
  friend bool operator==(const Mapping& a, const Mapping& b);
  friend bool operator<(const Mapping& a, const Mapping& b);
};

struct DecompOptions {
  bool delay_resistant = false;  // use the refined epsilon case
  // Mutation used to test sensitivity: drops the <eps> prefixes in the
  // combined diamond case of the refined epsilon clause.
  bool mutate_drop_eps = false;
  std::size_t negation_cap = 5000;  // minimal choice sets kept per negation
  int fixpoint_rounds = 8;
  RuloidOptions ruloids;
};

// Computes t^-1(phi) (or the delay-resistant variant) for a fixed TSS and
// marking. Ruloids come from the linear proofs of the engine. Results are
// memoized per (term up to renaming, formula). Mappings whose entries are
// syntactically contradictory, and mappings implied by a weaker one in the
// same set, are dropped; neither changes the existential reading.
class Decomposer {
 public:
  Decomposer(const TSS& P, ArgumentMarking gamma, DecompOptions opts = {});

  // Throws PartialRuloids, InfiniteDecomposition, CapExceeded.
  std::vector<Mapping> decompose(const Term& t, const Formula& phi);

  const ArgumentMarking& gamma() const { return gamma_; }
  RuloidEngine& engine() { return engine_; }

 private:
  std::vector<Mapping> compute(const Term& t, const Formula& phi);
  std::vector<Mapping> univariate(const Term& t, const Formula& phi);
  std::vector<Mapping> negation(const Term& t, const std::vector<Mapping>& inner);
  std::vector<Mapping> epsilon(const Term& t, const Formula& phi);
  std::vector<Mapping> epsilon_dr(const Term& t, const Formula& phi);
  const std::vector<Ruloid>& linear(const Term& t, const std::string& label);
  bool liquid(const Term& t, const std::string& x) const;
  Mapping step(const Term& t, const Rule& r, const Mapping& chi, bool weak_premises, bool dr) const;

  const TSS& P_;
  ArgumentMarking gamma_;
  DecompOptions opts_;
  RuloidEngine engine_;
  std::map<std::pair<Term, std::string>, std::vector<Mapping>> memo_;
  std::map<std::pair<Term, std::string>, std::vector<Ruloid>> ruloid_memo_;
  // Revisits of a (term, formula) pair under construction read the current
  // approximation; the outermost visit iterates to a fixpoint.
  std::set<std::pair<Term, std::string>> active_, cycle_hits_;
  std::map<std::pair<Term, std::string>, std::vector<Mapping>> approx_;
};

std::vector<Mapping> decompose(const TSS& P, const Term& t, const Formula& phi, const ArgumentMarking& gamma,
                               DecompOptions opts = {});
std::vector<Mapping> decompose_dr(const TSS& P, const Term& t, const Formula& phi, const ArgumentMarking& gamma,
                                  DecompOptions opts = {});

struct TheoremMismatch {
  Term term;
  Formula formula;
  Subst rho;
  bool lhs = false;  // rho(t) |= phi
  bool rhs = false;  // some mapping holds under rho
};

struct TheoremReport {
  std::size_t checks = 0;
  std::size_t mappings = 0;  // total mappings produced
  std::vector<TheoremMismatch> mismatches;
  std::vector<std::string> notes;
  bool ok() const { return mismatches.empty(); }
};

// Evaluates both sides of the decomposition biconditional for every term,
// formula and closed substitution over the base processes.
TheoremReport verify_decomposition_theorem(const TSS& P, const std::vector<Term>& terms,
                                           const std::vector<Formula>& formulas, const std::vector<Term>& base,
                                           const ArgumentMarking& gamma, DecompOptions opts = {},
                                           int lts_depth = 64);

struct PreservationReport {
  std::size_t formulas_checked = 0;
  std::size_t syntactic = 0;  // entries in the expected class after normalize
  std::size_t pairs_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// Semantic check that the decomposed entries respect the equivalence of the
// class: for phi in Od, entries for lambda-liquid variables must not
// separate delay bisimilar states and the others must not separate rooted
// delay bisimilar states (likewise for the weak classes; rooted classes
// always use the rooted equivalence).
PreservationReport verify_class_preservation(const TSS& P, const MarkingSet& m, const std::vector<Term>& terms,
                                             const std::vector<Formula>& formulas, FormulaClass cls,
                                             int samples, std::uint64_t seed, DecompOptions opts = {});

}  // namespace sosw
