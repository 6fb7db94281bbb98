#pragma once

#include <set>
#include <unordered_map>
#include <vector>

#include "sosw/lts.hpp"
#include "sosw/tss.hpp"

namespace sosw {

enum class Status { Proved, Refuted, Undefined };
const char* status_name(Status s);

struct GroundVerdict {
  Literal literal;
  Status status = Status::Refuted;
};

// Three-valued well-founded model of the ground instantiation of a standard
// TSS, evaluated lazily per closed term. Rules with lookahead are rejected.
class GroundSemantics {
 public:
  using Moves = std::set<std::pair<std::string, Term>>;
  struct Info {
    Moves proved;
    Moves undefined;
  };

  // free_universe instantiates free rule variables; it may be empty when no
  // rule has free variables.
  explicit GroundSemantics(const TSS& P, std::vector<Term> free_universe = {});

  const Info& info(const Term& closed);
  Status status(const Literal& closed);
  std::size_t evaluated() const { return done_.size(); }
  const TSS& tss() const { return P_; }

 private:
  struct Prepared {
    const Rule* rule;
    std::vector<std::string> free;
  };
  enum class Phase { Under, Over };

  void evaluate_batch(const Term& root);
  std::vector<Term> dependencies(const Term& s) const;
  template <class F>
  void for_each_instance(const Prepared& pr, const Term& s, F&& f) const;

  const TSS& P_;
  std::vector<Term> free_universe_;
  std::vector<Prepared> rules_;
  std::unordered_map<Term, Info, TermHash> done_;
};

// Verdicts for every proved or undefined positive literal with lhs in the
// universe; every other positive literal is refuted. Throws UniverseEscape
// when a target leaves the universe.
std::vector<GroundVerdict> ground_model(const TSS& P, const std::vector<Term>& universe,
                                        const std::vector<Term>& free_universe = {});

struct GeneratedLTS {
  LTS lts;
  bool partial = false;
  std::vector<Term> frontier;  // states found beyond the depth bound, unexplored
};

// Breadth-first exploration from the roots. States up to depth_bound steps
// away are expanded. Throws IncompleteTSS on an undefined literal.
GeneratedLTS generate_lts(GroundSemantics& G, const std::vector<Term>& roots, int depth_bound);
GeneratedLTS generate_lts(const TSS& P, const std::vector<Term>& roots, int depth_bound);

}  // namespace sosw
