#include "sosw/semantics.hpp"

#include <deque>
#include <functional>
#include <map>

#include "sosw/error.hpp"

namespace sosw {

const char* status_name(Status s) {
  switch (s) {
    case Status::Proved: return "proved";
    case Status::Refuted: return "refuted";
    case Status::Undefined: return "undefined";
  }
  return "?";
}

GroundSemantics::GroundSemantics(const TSS& P, std::vector<Term> free_universe)
    : P_(P), free_universe_(std::move(free_universe)) {
  for (const auto& r : P_.rules) {
    if (!r.standard()) continue;
    auto c = classify(r);
    if (c.has_lookahead) throw Error(ErrorKind::Unsupported, "rule '" + r.name + "' has lookahead");
    Prepared pr{&r, free_variables(r)};
    if (!pr.free.empty() && free_universe_.empty())
      throw Error(ErrorKind::Unbounded, "rule '" + r.name + "' has free variables and no universe is configured");
    rules_.push_back(std::move(pr));
  }
}

// Calls f(subst) for every instantiation of the source and free variables of
// the rule that matches s. Premise rhs variables are left unbound.
template <class F>
void GroundSemantics::for_each_instance(const Prepared& pr, const Term& s, F&& f) const {
  Subst sigma;
  if (!match(pr.rule->source(), s, sigma)) return;
  if (pr.free.empty()) {
    f(sigma);
    return;
  }
  std::vector<std::size_t> idx(pr.free.size(), 0);
  while (true) {
    Subst s2 = sigma;
    for (std::size_t k = 0; k < idx.size(); ++k) s2[pr.free[k]] = free_universe_[idx[k]];
    f(s2);
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == free_universe_.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
}

std::vector<Term> GroundSemantics::dependencies(const Term& s) const {
  std::vector<Term> out;
  for (const auto& pr : rules_)
    for_each_instance(pr, s, [&](const Subst& sigma) {
      for (const auto& l : pr.rule->premises) out.push_back(sosw::apply(sigma, l.lhs));
    });
  return out;
}

void GroundSemantics::evaluate_batch(const Term& root) {
  // Collect the new terms reachable through premise dependencies.
  std::vector<Term> batch;
  std::unordered_map<Term, int, TermHash> index;
  std::vector<Term> stack{root};
  while (!stack.empty()) {
    Term t = stack.back();
    stack.pop_back();
    if (done_.count(t) || index.count(t)) continue;
    if (!is_closed(t)) throw Error(ErrorKind::Precondition, "term " + t.str() + " is not closed");
    index.emplace(t, static_cast<int>(batch.size()));
    batch.push_back(t);
    for (auto& d : dependencies(t)) stack.push_back(std::move(d));
  }
  const std::size_t n = batch.size();
  using Sets = std::vector<Moves>;

  auto has_label = [](const Moves& m, const std::string& l) {
    auto it = m.lower_bound({l, Term()});
    return it != m.end() && it->first == l;
  };

  // Least fixpoint with negative premises judged against J.
  auto A = [&](const Sets& J, Phase phase) {
    Sets cur(n);
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < n; ++i) {
        const Term& s = batch[i];
        for (const auto& pr : rules_) {
          const Rule& r = *pr.rule;
          for_each_instance(pr, s, [&](const Subst& sigma0) {
            std::vector<Literal> pos, neg;
            for (const auto& l : r.premises) (l.positive ? pos : neg).push_back(l);
            // Negative premises only depend on sigma0 (no lookahead).
            for (const auto& l : neg) {
              Term w = sosw::apply(sigma0, l.lhs);
              auto it = index.find(w);
              bool blocked;
              if (it != index.end()) {
                blocked = has_label(J[it->second], l.label);
              } else {
                const Info& in = done_.at(w);
                blocked = has_label(in.proved, l.label) ||
                          (phase == Phase::Under && has_label(in.undefined, l.label));
              }
              if (blocked) return;
            }
            std::function<void(std::size_t, Subst&)> rec = [&](std::size_t k, Subst& sigma) {
              if (k == pos.size()) {
                Term target = sosw::apply(sigma, r.conclusion.rhs);
                if (cur[i].insert({r.conclusion.label, target}).second) changed = true;
                return;
              }
              const Literal& l = pos[k];
              Term w = sosw::apply(sigma, l.lhs);
              auto visit = [&](const Moves& m) {
                for (auto it = m.lower_bound({l.label, Term()}); it != m.end() && it->first == l.label; ++it) {
                  Subst s2 = sigma;
                  if (match(sosw::apply(s2, l.rhs), it->second, s2)) rec(k + 1, s2);
                }
              };
              auto it = index.find(w);
              if (it != index.end()) {
                visit(Moves(cur[it->second]));
              } else {
                const Info& in = done_.at(w);
                visit(in.proved);
                if (phase == Phase::Over) visit(in.undefined);
              }
            };
            Subst sigma = sigma0;
            rec(0, sigma);
          });
        }
      }
    }
    return cur;
  };

  Sets T(n), U;
  while (true) {
    U = A(T, Phase::Over);
    Sets T2 = A(U, Phase::Under);
    if (T2 == T) break;
    T = std::move(T2);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Info in;
    in.proved = T[i];
    for (const auto& m : U[i])
      if (!T[i].count(m)) in.undefined.insert(m);
    done_.emplace(batch[i], std::move(in));
  }
}

const GroundSemantics::Info& GroundSemantics::info(const Term& t) {
  auto it = done_.find(t);
  if (it != done_.end()) return it->second;
  evaluate_batch(t);
  return done_.at(t);
}

Status GroundSemantics::status(const Literal& l) {
  const Info& in = info(l.lhs);
  if (l.positive) {
    std::pair<std::string, Term> m{l.label, l.rhs};
    if (in.proved.count(m)) return Status::Proved;
    if (in.undefined.count(m)) return Status::Undefined;
    return Status::Refuted;
  }
  auto has = [&](const Moves& ms) {
    auto it = ms.lower_bound({l.label, Term()});
    return it != ms.end() && it->first == l.label;
  };
  if (has(in.proved)) return Status::Refuted;
  if (has(in.undefined)) return Status::Undefined;
  return Status::Proved;
}

std::vector<GroundVerdict> ground_model(const TSS& P, const std::vector<Term>& universe,
                                        const std::vector<Term>& free_universe) {
  GroundSemantics G(P, free_universe);
  std::set<Term> U(universe.begin(), universe.end());
  std::vector<GroundVerdict> out;
  std::set<Term> escaped;
  for (const auto& t : universe) {
    const auto& in = G.info(t);
    for (const auto& [l, u] : in.proved) {
      out.push_back({Literal::pos(t, l, u), Status::Proved});
      if (!U.count(u)) escaped.insert(u);
    }
    for (const auto& [l, u] : in.undefined) {
      out.push_back({Literal::pos(t, l, u), Status::Undefined});
      if (!U.count(u)) escaped.insert(u);
    }
  }
  if (!escaped.empty()) {
    std::string msg = "targets outside the universe:";
    for (const auto& e : escaped) msg += " " + P.sig.print(e);
    throw Error(ErrorKind::UniverseEscape, msg);
  }
  return out;
}

GeneratedLTS generate_lts(GroundSemantics& G, const std::vector<Term>& roots, int depth_bound) {
  const TSS& P = G.tss();
  GeneratedLTS out;
  std::map<Term, int> dist;
  std::deque<Term> queue;
  auto state = [&](const Term& t) {
    if (auto s = out.lts.find(t)) return *s;
    return out.lts.add_state(t, P.sig.print(t));
  };
  for (const auto& r : roots) {
    state(r);
    if (dist.emplace(r, 0).second) queue.push_back(r);
  }
  if (!roots.empty()) out.lts.initial = *out.lts.find(roots.front());
  while (!queue.empty()) {
    Term t = queue.front();
    queue.pop_front();
    int d = dist.at(t);
    if (d > depth_bound) {
      out.partial = true;
      out.frontier.push_back(t);
      continue;
    }
    const auto& in = G.info(t);
    if (!in.undefined.empty()) {
      const auto& [l, u] = *in.undefined.begin();
      throw Error(ErrorKind::IncompleteTSS,
                  "literal " + print_literal(P.sig, Literal::pos(t, l, u)) + " is neither provable nor refutable");
    }
    int from = state(t);
    for (const auto& [l, u] : in.proved) {
      int to = state(u);
      out.lts.add_transition(from, l, to);
      if (dist.emplace(u, d + 1).second) queue.push_back(u);
    }
  }
  return out;
}

GeneratedLTS generate_lts(const TSS& P, const std::vector<Term>& roots, int depth_bound) {
  GroundSemantics G(P);
  return generate_lts(G, roots, depth_bound);
}

}  // namespace sosw
