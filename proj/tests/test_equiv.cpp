#include <gtest/gtest.h>

#include "sosw/dsl.hpp"
#include "sosw/equiv.hpp"
#include "sosw/error.hpp"
#include "sosw/harness.hpp"
#include "sosw/lts.hpp"
#include "sosw/semantics.hpp"

using namespace sosw;

namespace {

// Direct transcription of the transfer conditions, iterated to the greatest
// fixpoint over an explicit relation.
class Naive {
 public:
  explicit Naive(const LTS& L) : L_(L), n_(L.size()) {
    eps_.assign(n_, std::vector<char>(n_, 0));
    for (std::size_t s = 0; s < n_; ++s) eps_[s][s] = 1;
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t s = 0; s < n_; ++s)
        for (std::size_t u = 0; u < n_; ++u)
          if (eps_[s][u])
            for (const auto& [l, v] : L_.out(static_cast<int>(u)))
              if (l == kTau && !eps_[s][v]) eps_[s][v] = changed = 1;
    }
  }

  // q can answer p -l-> p2 ending in a state related to p2.
  bool answer(int q, const std::string& l, int p2, EquivKind k, const std::vector<std::vector<char>>& R,
              bool rooted) const {
    if (k == EquivKind::Strong) {
      for (const auto& [m, q2] : L_.out(q))
        if (m == l && R[p2][q2]) return true;
      return false;
    }
    if (l == kTau && !rooted && R[p2][q]) return true;
    for (std::size_t q1 = 0; q1 < n_; ++q1) {
      if (!eps_[q][q1]) continue;
      if (rooted && q1 != static_cast<std::size_t>(q)) continue;  // first step is the move itself
      for (const auto& [m, q2] : L_.out(static_cast<int>(q1))) {
        if (m != l) continue;
        if (k == EquivKind::Delay && R[p2][q2]) return true;
        if (k == EquivKind::Weak)
          for (std::size_t q3 = 0; q3 < n_; ++q3)
            if (eps_[q2][q3] && R[p2][q3]) return true;
      }
    }
    return false;
  }

  std::vector<std::vector<char>> bisim(EquivKind k) const {
    std::vector<std::vector<char>> R(n_, std::vector<char>(n_, 1));
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t p = 0; p < n_; ++p)
        for (std::size_t q = 0; q < n_; ++q)
          if (R[p][q] && !(transfer(p, q, k, R) && transfer(q, p, k, R))) R[p][q] = 0, changed = true;
    }
    return R;
  }

  bool transfer(std::size_t p, std::size_t q, EquivKind k, const std::vector<std::vector<char>>& R) const {
    for (const auto& [l, p2] : L_.out(static_cast<int>(p)))
      if (!answer(static_cast<int>(q), l, p2, k, R, false)) return false;
    return true;
  }

  // Rooted: every initial step, tau included, is answered by a genuine step
  // (possibly preceded by tau-steps), ending in the unrooted relation.
  bool rooted(int p, int q, EquivKind k, const std::vector<std::vector<char>>& R) const {
    auto one = [&](int a, int b, const std::vector<std::vector<char>>& Rd) {
      for (const auto& [l, a2] : L_.out(a)) {
        bool ok = false;
        for (std::size_t b1 = 0; b1 < n_ && !ok; ++b1) {
          if (!eps_[b][b1]) continue;
          for (const auto& [m, b2] : L_.out(static_cast<int>(b1))) {
            if (m != l) continue;
            if (k == EquivKind::Delay && Rd[a2][b2]) ok = true;
            if (k == EquivKind::Weak)
              for (std::size_t b3 = 0; b3 < n_; ++b3)
                if (eps_[b2][b3] && Rd[a2][b3]) ok = true;
          }
        }
        if (!ok) return false;
      }
      return true;
    };
    std::vector<std::vector<char>> Rt(n_, std::vector<char>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) Rt[i][j] = R[j][i];
    return one(p, q, R) && one(q, p, Rt);
  }

 private:
  const LTS& L_;
  std::size_t n_;
  std::vector<std::vector<char>> eps_;
};

LTS base_lts(const std::string& spec) {
  TSS P = load_bundled(spec);
  return generate_lts(P, P.base, 16).lts;
}

int state(const LTS& L, const std::string& name) { return *L.find(name); }

}  // namespace

// Library fixpoint against the naive transcription on random LTSs.
TEST(Equiv, AgreesWithNaiveTranscription) {
  for (int seed = 0; seed < 150; ++seed) {
    LTS L = random_lts(500 + seed, 8, 2);
    Naive N(L);
    for (EquivKind k : {EquivKind::Strong, EquivKind::Delay, EquivKind::Weak}) {
      auto R = N.bisim(k);
      Partition P = bisimilarity(L, k);
      for (std::size_t p = 0; p < L.size(); ++p)
        for (std::size_t q = 0; q < L.size(); ++q)
          ASSERT_EQ(P.same(p, q), R[p][q] != 0) << "seed " << 500 + seed << " kind " << int(k);
      if (k == EquivKind::Strong) continue;
      Partition Pr = equivalence(L, {k, true});
      for (std::size_t p = 0; p < L.size(); ++p)
        for (std::size_t q = 0; q < L.size(); ++q)
          ASSERT_EQ(Pr.same(p, q), N.rooted(p, q, k, R)) << "seed " << 500 + seed << " rooted " << int(k);
    }
  }
}

TEST(Equiv, OracleAgreesAndChainHolds) {
  for (int seed = 0; seed < 100; ++seed) {
    LTS L = random_lts(seed, 12, 3);
    for (EquivKind k : {EquivKind::Delay, EquivKind::Weak})
      for (bool rooted : {false, true}) EXPECT_EQ(equivalence(L, {k, rooted}), oracle_bisimilarity(L, {k, rooted}));
    Partition s = bisimilarity(L, EquivKind::Strong), b = bisimilarity(L, EquivKind::Branching),
              d = bisimilarity(L, EquivKind::Delay), w = bisimilarity(L, EquivKind::Weak);
    EXPECT_TRUE(s.refines(b));
    EXPECT_TRUE(b.refines(d));
    EXPECT_TRUE(d.refines(w));
  }
}

TEST(Equiv, OracleCap) {
  LTS L;
  for (int i = 0; i < 70; ++i) L.add_state("s" + std::to_string(i));
  try {
    oracle_bisimilarity(L, {EquivKind::Weak, false}, 64);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CapExceeded);
  }
}

// p0 and p1 of the negative-premise example are rooted delay bisimilar.
TEST(Equiv, NegativeExampleProcesses) {
  LTS L = base_lts("counter_negative");
  EXPECT_TRUE(equivalence(L, {EquivKind::Delay, true}).same(state(L, "p0"), state(L, "p1")));
  EXPECT_FALSE(bisimilarity(L, EquivKind::Strong).same(state(L, "p0"), state(L, "p1")));
}

// The eta example: rooted weak but not rooted delay bisimilar.
TEST(Equiv, EtaExampleProcesses) {
  LTS L = base_lts("counter_eta");
  int p0 = state(L, "p0"), p1 = state(L, "p1");
  EXPECT_TRUE(equivalence(L, {EquivKind::Weak, true}).same(p0, p1));
  EXPECT_FALSE(equivalence(L, {EquivKind::Delay, true}).same(p0, p1));
  EXPECT_FALSE(bisimilarity(L, EquivKind::Delay).same(p0, p1));
}

// The s-operator processes: rooted delay bisimilar, not branching bisimilar.
TEST(Equiv, SOperatorProcesses) {
  LTS L = base_lts("s_operator");
  int p0 = state(L, "p0"), p1 = state(L, "p1");
  EXPECT_TRUE(equivalence(L, {EquivKind::Delay, true}).same(p0, p1));
  EXPECT_FALSE(bisimilarity(L, EquivKind::Branching).same(p0, p1));
}

TEST(Equiv, RootednessMatters) {
  // tau.a against a: weakly but not rooted weakly bisimilar.
  LTS L = read_aut("des (0, 3, 4)\n(0, \"tau\", 1)\n(1, \"a\", 3)\n(2, \"a\", 3)\n");
  EXPECT_TRUE(bisimilarity(L, EquivKind::Weak).same(0, 2));
  EXPECT_TRUE(bisimilarity(L, EquivKind::Delay).same(0, 2));
  EXPECT_FALSE(equivalence(L, {EquivKind::Weak, true}).same(0, 2));
  EXPECT_FALSE(rooted_related(L, 0, 2, EquivKind::Delay));
}

TEST(Equiv, PartitionNumbering) {
  LTS L = read_aut("des (0, 2, 3)\n(0, \"a\", 2)\n(1, \"a\", 2)\n");
  Partition P = bisimilarity(L, EquivKind::Strong);
  EXPECT_EQ(P.block, (std::vector<int>{0, 0, 1}));
  EXPECT_EQ(P.count, 2);
}
