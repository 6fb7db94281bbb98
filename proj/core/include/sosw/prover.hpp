#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sosw/tss.hpp"

namespace sosw {

// Proof tree over open literals. A node with an empty rule name is a
// hypothesis leaf.
struct ProofTree {
  Literal conclusion;
  std::string rule;
  std::vector<ProofTree> children;

  bool is_hypothesis() const { return rule.empty(); }
  std::vector<Literal> hypotheses() const;
};

ProofTree apply(const Subst& s, const ProofTree& p);
std::string print_proof(const Signature& sig, const ProofTree& p, int indent = 0);

// Backward proof search from a fixed rule set with a fixed list of
// hypotheses (at most 64). Variables in goals are rigid.
class Prover {
 public:
  struct Result {
    Term target;             // positive goals only
    std::uint64_t used = 0;  // bitmask over hypotheses
    ProofTree proof;
  };

  Prover(const std::vector<Rule>& rules, std::vector<Literal> hyps, bool linear);

  // All proofs of s -label-> _ within depth rule applications.
  std::vector<Result> prove_pos(const Term& s, const std::string& label, int depth);
  // All proofs of s -label!-> within depth (hypotheses or non-standard rules).
  std::vector<Result> prove_neg(const Term& s, const std::string& label, int depth);

  bool exhausted() const { return exhausted_; }
  const std::vector<Literal>& hyps() const { return hyps_; }

 private:
  std::vector<Result> apply_rule(const Rule& r, const Term& s, int depth);

  const std::vector<Rule>& rules_;
  std::vector<Literal> hyps_;
  bool linear_;
  bool exhausted_ = false;
  FreshNames fresh_{"_p"};
  std::size_t budget_ = 200000;
};

// Linear irredundant proof of r from the rules: every premise of r is used
// as a hypothesis and no positive premise is used twice. Sets exhausted when
// the depth bound cut the search.
std::optional<ProofTree> linearly_provable(const Rule& r, const std::vector<Rule>& rules, int depth,
                                           bool* exhausted = nullptr);

// Membership in R-bar: instances of a rule of R under a bijective renaming of
// variables, with the given source and label, whose premises lie in allowed.
struct RbarMatch {
  const Rule* rule;
  Subst renaming;
  Term target;
  std::vector<Literal> premises;
};
std::vector<RbarMatch> rbar_matches(const std::vector<Rule>& R, const Term& source, const std::string& label,
                                    const std::vector<Literal>& allowed);
bool in_rbar(const std::vector<Rule>& R, const Rule& r);

// Irredundantly provable from the gamma-patience rules: H = {x -tau-> y},
// target t[y/x], the occurrence of x gamma-liquid. Covers the identity rule.
bool is_gamma_patient_rule(const Rule& r, const ArgumentMarking& gamma);

}  // namespace sosw
