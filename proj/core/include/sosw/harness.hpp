#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sosw/format.hpp"
#include "sosw/modal.hpp"
#include "sosw/ruloid.hpp"
#include "sosw/tss.hpp"

namespace sosw {

struct CongruenceViolation {
  Term context;  // hole variable x
  Term left, right;  // the arguments, equivalent
  Term left_filled, right_filled;
  std::optional<Formula> witness;  // holds in left_filled, fails in right_filled
  bool witness_verified = false;
};

struct CongruenceReport {
  EquivalenceKind kind;
  int depth = 1;
  std::size_t contexts = 0;
  std::size_t pairs_tested = 0;
  std::vector<CongruenceViolation> violations;
  bool clean() const { return violations.empty(); }
};

struct CongruenceOptions {
  int lts_depth = 64;
  std::size_t context_cap = 20000;
};

// Univariate contexts over the hole "x" up to the given depth; the other
// leaves are the constants and the base processes.
std::vector<Term> univariate_contexts(const Signature& sig, int depth, const std::vector<Term>& leaves);

// For every context C and every pair of distinct equivalent base processes
// p ~ q, checks C[p] ~ C[q]. Throws IncompleteTSS / UniverseEscape.
CongruenceReport congruence_check(const TSS& P, const EquivalenceKind& kind, int depth,
                                  const std::vector<Term>& base, const CongruenceOptions& opts = {});

// Open source terms up to the given depth whose leaves are pairwise distinct
// variables x1, x2, ...
std::vector<Term> open_terms(const Signature& sig, int depth);

struct CorrespondenceReport {
  std::size_t sources = 0;
  std::size_t instances = 0;  // (t, label, rho) triples checked
  std::vector<std::string> discrepancies;
  bool ok() const { return discrepancies.empty(); }
};

// Ground transitions of rho(t) against ruloid instances agreeing with rho on
// var(t), for every source term, label and closed substitution over the
// universe.
CorrespondenceReport check_ruloid_correspondence(const TSS& P, const std::vector<Term>& sources,
                                                 const std::vector<Term>& universe, RuloidOptions opts = {});

struct DelayValidationReport {
  std::size_t ruloids = 0;
  std::size_t instances = 0;  // substitutions meeting the delayed premises
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// For each ruloid H / t -a-> u and closed substitution rho with
// rho(x) =eps=>-b-> rho(y) for x -b-> y in H+ and rho(x) -c!-> for the stable
// negative premises, requires rho(t) =eps=>-a-> rho(u) in the generated LTS.
DelayValidationReport validate_delay_resistance(const TSS& P, const std::vector<Term>& sources,
                                                const std::vector<Term>& universe, RuloidOptions opts = {},
                                                int lts_depth = 64);

struct SuiteItem {
  std::string spec;
  std::string expectation;
  bool ok = false;
  bool inconclusive = false;
  std::string detail;
};

struct SuiteSummary {
  std::vector<SuiteItem> items;
  bool ok() const;
  bool inconclusive() const;
};

// Runs the expectations of one parsed spec.
std::vector<SuiteItem> run_expectations(const TSS& P, const std::string& spec_name);
// Runs every bundled spec, in name order.
SuiteSummary run_bundled_suite();

// Bundled spec sources by file stem, e.g. "bpa".
const std::map<std::string, std::string>& bundled_specs();
TSS load_bundled(const std::string& name);  // throws Precondition when unknown

}  // namespace sosw
