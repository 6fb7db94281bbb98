#pragma once

#include <map>
#include <string>
#include <vector>

#include "sosw/prover.hpp"
#include "sosw/tss.hpp"

namespace sosw {

struct Ruloid {
  Rule rule;
  bool linear = true;
  ProofTree proof;
};

struct RuloidSet {
  std::vector<Ruloid> ruloids;
  bool partial = false;  // the depth bound cut the construction
};

struct RuloidOptions {
  int depth_bound = 6;         // nesting of the structural recursion
  int resolve_rounds = 8;      // iterations of premise resolution
  std::size_t product_cap = 100000;
  std::vector<Term> free_universe;
};

// P-dagger: decent ntyft rules. Throws Unbounded for free variables without a universe.
TSS to_decent_ntyft(const TSS& P, const std::vector<Term>& free_universe = {});
// P-double-dagger: positive premise lhs reduced to variables. Throws BoundExceeded.
TSS to_xynft(const TSS& Pd, int rounds);
// P-plus: adds the non-standard rules f(x1..xn) -a!->. Throws CapExceeded.
TSS augment_nonstandard(const TSS& Pdd, std::size_t cap = 100000);

class RuloidEngine {
 public:
  explicit RuloidEngine(const TSS& P, RuloidOptions opts = {});

  const TSS& dagger() const { return dagger_; }
  const TSS& ddagger() const { return ddagger_; }
  const TSS& plus() const { return plus_; }

  // All ruloids with the given source and label: linear ones plus their
  // non-linear merges. Rhs variables are named y1, y2, ... avoiding var(source).
  RuloidSet ruloids(const Term& source, const std::string& label);
  // Only the ruloids obtained from linear proofs.
  RuloidSet linear_ruloids(const Term& source, const std::string& label);
  // Non-standard ruloids H / source -label!->.
  RuloidSet negative_ruloids(const Term& source, const std::string& label);

  const TSS& tss() const { return P_; }

 private:
  struct Partial {
    std::vector<Literal> premises;
    Term target;  // invalid for negative conclusions
    ProofTree proof;
  };
  struct Cached {
    std::vector<Partial> items;
    bool partial = false;
  };
  const Cached& base(const Term& t, const std::string& label, bool positive, int depth);
  Cached compute(const Term& t, const std::string& label, bool positive, int depth);
  Partial freshen(const Partial& p);
  RuloidSet finish(const Term& source, const Cached& c, bool positive, bool merges);

  const TSS& P_;
  RuloidOptions opts_;
  TSS dagger_, ddagger_, plus_;
  std::map<std::tuple<Term, std::string, bool>, Cached> memo_;
  FreshNames fresh_{"_r"};
};

// Renames every non-source variable to y1, y2, ... (skipping source
// variable names) in a canonical order.
Rule canonical_ruloid(const Rule& r);

}  // namespace sosw
