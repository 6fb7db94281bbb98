#pragma once

#include <vector>

#include "sosw/lts.hpp"
#include "sosw/tss.hpp"

namespace sosw {

// Block ids are numbered in order of first state occurrence, so equal
// equivalences give equal partitions.
struct Partition {
  std::vector<int> block;
  int count = 0;

  bool same(int p, int q) const { return block[p] == block[q]; }
  // Every block of this partition lies inside a block of coarser.
  bool refines(const Partition& coarser) const;
  static Partition from_relation(const std::vector<std::vector<char>>& rel);
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Saturated moves of an LTS. eps is the reflexive tau closure.
struct Saturation {
  explicit Saturation(const LTS& L);
  const LTS& lts;
  std::vector<std::string> labels;  // labels used in L, tau included
  std::vector<std::vector<int>> eps;
  // delay[s][l]: s =eps=> -l-> s'.  weak[s][l]: s =eps=> -l-> =eps=> s'.
  std::vector<std::vector<std::vector<int>>> delay, weak, strong;
  int label_index(const std::string& l) const;  // -1 when absent
};

// Pair-deletion greatest fixpoint, computed in synchronous rounds.
// level[p][q] is the round in which (p,q) was deleted, or -1 if never.
struct Approximants {
  std::vector<std::vector<int>> level;
  bool related(int p, int q) const { return level[p][q] < 0; }
};
Approximants bisimulation_approximants(const Saturation& S, EquivKind kind);

// Unrooted equivalence of the given kind.
Partition bisimilarity(const LTS& L, EquivKind kind);
// Rooted clause for delay and weak into the unrooted partition; for strong
// and branching the rooted clause of branching bisimilarity.
bool rooted_related(const Saturation& S, const Partition& unrooted, int p, int q, EquivKind kind);
bool rooted_related(const LTS& L, int p, int q, EquivKind kind);
Partition equivalence(const LTS& L, const EquivalenceKind& kind);

// Independent oracle: signature refinement over separately computed
// saturated transitions. Throws CapExceeded above cap states.
Partition oracle_bisimilarity(const LTS& L, const EquivalenceKind& kind, std::size_t cap = 64);

}  // namespace sosw
