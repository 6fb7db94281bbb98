#include "sosw/equiv.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "sosw/error.hpp"

namespace sosw {

bool Partition::refines(const Partition& coarser) const {
  std::map<int, int> image;
  for (std::size_t s = 0; s < block.size(); ++s) {
    auto [it, fresh] = image.emplace(block[s], coarser.block[s]);
    if (!fresh && it->second != coarser.block[s]) return false;
  }
  return true;
}

Partition Partition::from_relation(const std::vector<std::vector<char>>& rel) {
  Partition P;
  P.block.assign(rel.size(), -1);
  for (std::size_t p = 0; p < rel.size(); ++p) {
    if (P.block[p] >= 0) continue;
    P.block[p] = P.count;
    for (std::size_t q = p + 1; q < rel.size(); ++q)
      if (P.block[q] < 0 && rel[p][q]) P.block[q] = P.count;
    ++P.count;
  }
  return P;
}

Saturation::Saturation(const LTS& L) : lts(L), labels(L.labels()), eps(tau_closure(L)) {
  const std::size_t n = L.size(), m = labels.size();
  strong.assign(n, std::vector<std::vector<int>>(m));
  delay = weak = strong;
  for (std::size_t s = 0; s < n; ++s)
    for (const auto& [l, t] : L.out(static_cast<int>(s))) strong[s][label_index(l)].push_back(t);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t k = 0; k < m; ++k) {
      std::set<int> d, w;
      for (int s1 : eps[s])
        for (int s2 : strong[s1][k]) {
          d.insert(s2);
          w.insert(eps[s2].begin(), eps[s2].end());
        }
      delay[s][k].assign(d.begin(), d.end());
      weak[s][k].assign(w.begin(), w.end());
    }
}

int Saturation::label_index(const std::string& l) const {
  auto it = std::find(labels.begin(), labels.end(), l);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

namespace {

template <class R>
bool forward(const Saturation& S, EquivKind kind, int p, int q, const R& rel) {
  const int tau = S.label_index(kTau);
  for (std::size_t k = 0; k < S.labels.size(); ++k) {
    for (int p2 : S.strong[p][k]) {
      bool ok = false;
      if (kind != EquivKind::Strong && static_cast<int>(k) == tau && rel(p2, q)) ok = true;
      switch (kind) {
        case EquivKind::Strong:
          for (int q2 : S.strong[q][k]) ok = ok || rel(p2, q2);
          break;
        case EquivKind::Delay:
          for (int q2 : S.delay[q][k]) ok = ok || rel(p2, q2);
          break;
        case EquivKind::Weak:
          for (int q2 : S.weak[q][k]) ok = ok || rel(p2, q2);
          break;
        case EquivKind::Branching:
          for (int q1 : S.eps[q]) {
            if (ok) break;
            if (!rel(p, q1)) continue;
            for (int q2 : S.strong[q1][k]) ok = ok || rel(p2, q2);
          }
          break;
      }
      if (!ok) return false;
    }
  }
  return true;
}

}  // namespace

Approximants bisimulation_approximants(const Saturation& S, EquivKind kind) {
  const int n = static_cast<int>(S.lts.size());
  Approximants A;
  A.level.assign(n, std::vector<int>(n, -1));
  for (int round = 1;; ++round) {
    auto rel = [&](int a, int b) { return A.level[a][b] < 0; };
    std::vector<std::pair<int, int>> dead;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        if (rel(p, q) && !(forward(S, kind, p, q, rel) && forward(S, kind, q, p, rel))) dead.push_back({p, q});
    if (dead.empty()) break;
    for (auto [p, q] : dead) A.level[p][q] = A.level[q][p] = round;
  }
  return A;
}

Partition bisimilarity(const LTS& L, EquivKind kind) {
  Saturation S(L);
  auto A = bisimulation_approximants(S, kind);
  std::vector<std::vector<char>> rel(L.size(), std::vector<char>(L.size()));
  for (std::size_t p = 0; p < L.size(); ++p)
    for (std::size_t q = 0; q < L.size(); ++q) rel[p][q] = A.related(p, q);
  return Partition::from_relation(rel);
}

namespace {

const std::vector<std::vector<std::vector<int>>>& rooted_moves(const Saturation& S, EquivKind kind) {
  switch (kind) {
    case EquivKind::Delay: return S.delay;
    case EquivKind::Weak: return S.weak;
    default: return S.strong;
  }
}

bool rooted_forward(const Saturation& S, const Partition& U, int p, int q, EquivKind kind) {
  const auto& moves = rooted_moves(S, kind);
  for (std::size_t k = 0; k < S.labels.size(); ++k)
    for (int p2 : S.strong[p][k]) {
      bool ok = false;
      for (int q2 : moves[q][k]) ok = ok || U.same(p2, q2);
      if (!ok) return false;
    }
  return true;
}

}  // namespace

bool rooted_related(const Saturation& S, const Partition& unrooted, int p, int q, EquivKind kind) {
  return rooted_forward(S, unrooted, p, q, kind) && rooted_forward(S, unrooted, q, p, kind);
}

bool rooted_related(const LTS& L, int p, int q, EquivKind kind) {
  Saturation S(L);
  return rooted_related(S, bisimilarity(L, kind), p, q, kind);
}

Partition equivalence(const LTS& L, const EquivalenceKind& kind) {
  Partition U = bisimilarity(L, kind.base);
  if (!kind.rooted || kind.base == EquivKind::Strong) return U;
  Saturation S(L);
  std::vector<std::vector<char>> rel(L.size(), std::vector<char>(L.size()));
  for (std::size_t p = 0; p < L.size(); ++p)
    for (std::size_t q = p; q < L.size(); ++q)
      rel[p][q] = rel[q][p] = rooted_related(S, U, static_cast<int>(p), static_cast<int>(q), kind.base);
  return Partition::from_relation(rel);
}

// ---- oracle ---------------------------------------------------------------

namespace {

using Moves = std::vector<std::set<std::pair<std::string, int>>>;

std::vector<std::set<int>> tau_reach(const LTS& L) {
  std::vector<std::set<int>> out(L.size());
  for (std::size_t s = 0; s < L.size(); ++s) {
    std::deque<int> todo{static_cast<int>(s)};
    out[s].insert(static_cast<int>(s));
    while (!todo.empty()) {
      int u = todo.front();
      todo.pop_front();
      for (const auto& [l, v] : L.out(u))
        if (l == kTau && out[s].insert(v).second) todo.push_back(v);
    }
  }
  return out;
}

// Saturated transition relation whose strong bisimilarity is the requested
// equivalence: visible moves =eps=>-a-> (delay) or =eps=>-a->=eps=> (weak),
// tau moves =eps=> with zero steps allowed.
Moves saturate(const LTS& L, EquivKind kind) {
  Moves mv(L.size());
  auto reach = tau_reach(L);
  for (std::size_t s = 0; s < L.size(); ++s) {
    if (kind == EquivKind::Strong) {
      for (const auto& e : L.out(static_cast<int>(s))) mv[s].insert(e);
      continue;
    }
    for (int r : reach[s]) mv[s].insert({kTau, r});
    for (int r : reach[s])
      for (const auto& [l, v] : L.out(r)) {
        if (l == kTau) continue;
        if (kind == EquivKind::Delay) mv[s].insert({l, v});
        else
          for (int w : reach[v]) mv[s].insert({l, w});
      }
  }
  return mv;
}

Partition normalize_blocks(const std::vector<int>& raw) {
  Partition P;
  std::map<int, int> ids;
  for (int b : raw) {
    auto [it, fresh] = ids.emplace(b, P.count);
    if (fresh) ++P.count;
    P.block.push_back(it->second);
  }
  return P;
}

Partition refine(std::size_t n, const std::function<std::set<std::pair<std::string, int>>(int, const std::vector<int>&)>& sig) {
  std::vector<int> block(n, 0);
  std::size_t count = 1;
  for (;;) {
    std::map<std::pair<int, std::set<std::pair<std::string, int>>>, int> ids;
    std::vector<int> next(n);
    for (std::size_t s = 0; s < n; ++s) {
      auto key = std::make_pair(block[s], sig(static_cast<int>(s), block));
      next[s] = ids.emplace(std::move(key), static_cast<int>(ids.size())).first->second;
    }
    block = next;
    if (ids.size() == count) break;
    count = ids.size();
  }
  return normalize_blocks(block);
}

Partition oracle_unrooted(const LTS& L, EquivKind kind) {
  if (kind == EquivKind::Branching) {
    return refine(L.size(), [&](int s, const std::vector<int>& B) {
      // Moves after inert tau steps inside the block of s.
      std::set<std::pair<std::string, int>> out;
      std::set<int> seen{s};
      std::deque<int> todo{s};
      while (!todo.empty()) {
        int u = todo.front();
        todo.pop_front();
        for (const auto& [l, v] : L.out(u)) {
          if (l == kTau && B[v] == B[s]) {
            if (seen.insert(v).second) todo.push_back(v);
            continue;
          }
          out.insert({l, B[v]});
        }
      }
      return out;
    });
  }
  Moves mv = saturate(L, kind);
  return refine(L.size(), [&](int s, const std::vector<int>& B) {
    std::set<std::pair<std::string, int>> out;
    for (const auto& [l, v] : mv[s]) out.insert({l, B[v]});
    return out;
  });
}

}  // namespace

Partition oracle_bisimilarity(const LTS& L, const EquivalenceKind& kind, std::size_t cap) {
  if (L.size() > cap)
    throw Error(ErrorKind::CapExceeded, "oracle limited to " + std::to_string(cap) + " states");
  Partition U = oracle_unrooted(L, kind.base);
  if (!kind.rooted || kind.base == EquivKind::Strong) return U;

  // Rooted: initial moves p -a-> p' answered by single steps (branching) or
  // by =eps=>-a-> (delay) / =eps=>-a->=eps=> (weak) into the unrooted classes.
  auto reach = tau_reach(L);
  const std::size_t n = L.size();
  std::vector<std::set<std::pair<std::string, int>>> first(n), answers(n);
  for (std::size_t s = 0; s < n; ++s) {
    for (const auto& [l, v] : L.out(static_cast<int>(s))) first[s].insert({l, U.block[v]});
    if (kind.base == EquivKind::Branching) {
      answers[s] = first[s];
      continue;
    }
    for (int r : reach[s])
      for (const auto& [l, v] : L.out(r)) {
        if (kind.base == EquivKind::Delay) answers[s].insert({l, U.block[v]});
        else
          for (int w : reach[v]) answers[s].insert({l, U.block[w]});
      }
  }
  auto covers = [&](std::size_t p, std::size_t q) {
    return std::includes(answers[q].begin(), answers[q].end(), first[p].begin(), first[p].end());
  };
  std::vector<std::vector<char>> rel(n, std::vector<char>(n));
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q) rel[p][q] = covers(p, q) && covers(q, p);
  return Partition::from_relation(rel);
}

}  // namespace sosw
