#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sosw/tss.hpp"

namespace sosw {

enum class Result { Pass, Fail, Inconclusive };
const char* result_name(Result r);

// Condition ids: ready-simulation, patience, decent-nxytt, delta-subset,
// rbb-1..rbb-4, eta-1', cond-5, negative-stable, syn-3a, syn-3b, syn-3c,
// syn-4, manifest-dr.
struct Witness {
  std::string rule;
  std::string condition;
  std::string detail;
  bool inconclusive = false;  // search exhausted rather than refuted
};

struct Verdict {
  Result result = Result::Pass;
  std::vector<Witness> witnesses;

  void fail(std::string rule, std::string condition, std::string detail);
  void unknown(std::string rule, std::string condition, std::string detail);
  void merge(const Verdict& o);
  bool passed() const { return result == Result::Pass; }
  // Condition ids of the failing (not inconclusive) witnesses.
  std::set<std::string> failed_conditions() const;
};

struct FormatVerdict : Verdict {
  std::string format;
  MarkingSet markings;  // the predicates actually used
  std::vector<std::string> notes;
};

struct FormatOptions {
  int proof_depth = 6;          // linear provability searches
  std::size_t subset_cap = 4096;  // 2^12 sets M per rule
  std::vector<Term> free_universe;
};

// Least predicates generated by the rbb conditions 1-2 (lambda) and 3 (aleph).
MarkingSet infer_minimal_predicates(const TSS& P);

// Rooted branching bisimulation safety, conditions 1-4 (2-3 for
// non-standard rules). The patience clause of condition 4 is decided by a
// linear proof from the aleph&lambda patience rules.
Verdict check_rbb_safe(const Signature& sig, const Rule& r, const ArgumentMarking& aleph,
                       const ArgumentMarking& lambda);
// As check_rbb_safe with condition 1' in place of 1.
Verdict check_eta_safe(const Signature& sig, const Rule& r, const ArgumentMarking& aleph,
                       const ArgumentMarking& lambda);
Verdict check_condition5(const Rule& r, const ArgumentMarking& aleph, const ArgumentMarking& lambda);
Verdict check_negative_stable(const Rule& r);

// A premise is lambda-liquid when every variable of its lhs occurs only
// lambda-liquid in the source.
bool lambda_liquid_premise(const Rule& r, const Literal& premise, const ArgumentMarking& lambda);

struct DelayWitness {
  Rule first;   // H1 / t -tau-> v
  Rule second;  // H2 / v -alpha-> u
  std::string z;
};
struct DelayableResult {
  Result result = Result::Fail;
  std::optional<DelayWitness> witness;
};
// Delayability of a positive premise of r. With manifest set the first
// witness rule must be a rule of R up to bijective renaming.
DelayableResult check_delayable(const Literal& premise, const Rule& r, const std::vector<Rule>& R, int depth,
                                bool manifest);

// Manifest delay resistance of the decent ntyft conversion of P. lambda may
// be null (no predicate). Tries the simple criterion first, then explicit
// H^d and r_M search.
FormatVerdict check_manifest_delay_resistance(const TSS& P, const ArgumentMarking* lambda,
                                              const FormatOptions& opts = {});

const std::vector<std::string>& format_names();
// Throws Precondition for an unknown format name.
FormatVerdict check_format(const TSS& P, const std::string& format, const MarkingSet& m,
                           const FormatOptions& opts = {});

}  // namespace sosw
