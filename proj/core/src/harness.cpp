#include "sosw/harness.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "sosw/equiv.hpp"
#include "sosw/error.hpp"
#include "sosw/semantics.hpp"

namespace sosw {

namespace {

const std::string kHole = "x";

Term fill(const Term& context, const Term& p) { return sosw::apply(Subst{{kHole, p}}, context); }

std::vector<Term> leaf_terms(const Signature& sig, const std::vector<Term>& extra) {
  std::vector<Term> out;
  std::set<Term> seen;
  for (const auto& c : sig.constants()) {
    Term t = Term::app(c.name);
    if (seen.insert(t).second) out.push_back(t);
  }
  for (const auto& t : extra)
    if (seen.insert(t).second) out.push_back(t);
  return out;
}

// Closed substitutions var -> universe, in lexicographic order.
template <class F>
void for_each_subst(const std::vector<std::string>& vs, const std::vector<Term>& universe, F&& f) {
  if (universe.empty() && !vs.empty()) return;
  std::vector<std::size_t> idx(vs.size(), 0);
  for (;;) {
    Subst s;
    for (std::size_t i = 0; i < vs.size(); ++i) s[vs[i]] = universe[idx[i]];
    f(s);
    std::size_t g = 0;
    while (g < idx.size() && ++idx[g] == universe.size()) idx[g++] = 0;
    if (g == idx.size()) return;
  }
}

std::string show_subst(const Signature& sig, const Subst& s) {
  std::string out = "[";
  bool first = true;
  for (const auto& [x, t] : s) {
    out += (first ? "" : ", ") + x + ":=" + sig.print(t);
    first = false;
  }
  return out + "]";
}

FormulaClass witness_class(const EquivalenceKind& k) {
  if (k.base == EquivKind::Strong) return FormulaClass::O;
  return class_for(k);
}

}  // namespace

std::vector<Term> univariate_contexts(const Signature& sig, int depth, const std::vector<Term>& leaves) {
  const auto fill_leaves = leaf_terms(sig, leaves);
  std::vector<Term> all{Term::var(kHole)};
  std::vector<Term> frontier = all;
  std::vector<Term> out;
  for (int d = 1; d <= depth; ++d) {
    std::vector<Term> next;
    for (const auto& f : sig.functions())
      for (int pos = 0; pos < f.arity; ++pos) {
        // Other positions range over the leaves.
        std::vector<std::size_t> idx(f.arity, 0);
        for (const auto& inner : frontier) {
          std::fill(idx.begin(), idx.end(), 0);
          for (;;) {
            std::vector<Term> args;
            for (int i = 0; i < f.arity; ++i) args.push_back(i == pos ? inner : fill_leaves[idx[i]]);
            next.push_back(Term::app(f.name, std::move(args)));
            int k = 0;
            while (k < f.arity && (k == pos || ++idx[k] == fill_leaves.size())) {
              if (k != pos) idx[k] = 0;
              ++k;
            }
            if (k == f.arity) break;
          }
        }
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

CongruenceReport congruence_check(const TSS& P, const EquivalenceKind& kind, int depth, const std::vector<Term>& base,
                                  const CongruenceOptions& opts) {
  CongruenceReport rep;
  rep.kind = kind;
  rep.depth = depth;
  GroundSemantics G(P);

  // Equivalent argument pairs among the base processes.
  GeneratedLTS bl = generate_lts(G, base, opts.lts_depth);
  if (bl.partial) throw Error(ErrorKind::BoundExceeded, "base processes not explored within the depth bound");
  Partition bp = equivalence(bl.lts, kind);
  std::vector<std::pair<Term, Term>> pairs;
  for (std::size_t i = 0; i < base.size(); ++i)
    for (std::size_t j = i + 1; j < base.size(); ++j)
      if (base[i] != base[j] && bp.same(*bl.lts.find(base[i]), *bl.lts.find(base[j]))) pairs.push_back({base[i], base[j]});
  std::set<Term> used;
  for (const auto& [p, q] : pairs) used.insert(p), used.insert(q);

  auto contexts = univariate_contexts(P.sig, depth, base);
  if (contexts.size() > opts.context_cap)
    throw Error(ErrorKind::CapExceeded, std::to_string(contexts.size()) + " contexts exceed the cap");
  rep.contexts = contexts.size();
  if (pairs.empty()) return rep;

  for (const auto& C : contexts) {
    std::vector<Term> roots;
    for (const auto& p : used) roots.push_back(fill(C, p));
    GeneratedLTS g = generate_lts(G, roots, opts.lts_depth);
    if (g.partial) throw Error(ErrorKind::BoundExceeded, "context " + P.sig.print(C) + " not explored within the depth bound");
    Partition part = equivalence(g.lts, kind);
    for (const auto& [p, q] : pairs) {
      ++rep.pairs_tested;
      Term cp = fill(C, p), cq = fill(C, q);
      int sp = *g.lts.find(cp), sq = *g.lts.find(cq);
      if (part.same(sp, sq)) continue;
      CongruenceViolation v{C, p, q, cp, cq, std::nullopt, false};
      if (kind.base != EquivKind::Branching) {
        v.witness = distinguishing_formula(g.lts, sp, sq, witness_class(kind));
        if (v.witness) {
          ModelChecker mc(g.lts);
          v.witness_verified = mc.satisfies(sp, *v.witness) && !mc.satisfies(sq, *v.witness);
        }
      }
      rep.violations.push_back(std::move(v));
    }
  }
  return rep;
}

std::vector<Term> open_terms(const Signature& sig, int depth) {
  // Shapes built with placeholder leaves, then renamed x1, x2, ... left to right.
  std::vector<Term> shapes{Term::var("_")};
  std::vector<Term> all = shapes;
  for (int d = 1; d <= depth; ++d) {
    std::vector<Term> next;
    for (const auto& f : sig.functions()) {
      std::vector<std::size_t> idx(f.arity, 0);
      for (;;) {
        std::vector<Term> args;
        bool deep = false;
        for (int i = 0; i < f.arity; ++i) {
          args.push_back(all[idx[i]]);
          deep = deep || static_cast<int>(all[idx[i]].depth()) == d - 1;
        }
        if (deep) next.push_back(Term::app(f.name, std::move(args)));
        int k = 0;
        while (k < f.arity && ++idx[k] == all.size()) idx[k++] = 0;
        if (k == f.arity) break;
      }
    }
    all.insert(all.end(), next.begin(), next.end());
  }
  std::vector<Term> out;
  for (const auto& s : all) {
    int n = 0;
    std::function<Term(const Term&)> rn = [&](const Term& t) -> Term {
      if (t.is_var()) return Term::var("x" + std::to_string(++n));
      std::vector<Term> args;
      for (const auto& a : t.args()) args.push_back(rn(a));
      return Term::app(t.name(), std::move(args));
    };
    out.push_back(rn(s));
  }
  return out;
}

CorrespondenceReport check_ruloid_correspondence(const TSS& P, const std::vector<Term>& sources,
                                                 const std::vector<Term>& universe, RuloidOptions opts) {
  CorrespondenceReport rep;
  GroundSemantics G(P);
  RuloidEngine E(P, opts);
  auto moves = [&](const Term& p, const std::string& l) {
    std::set<Term> out;
    const auto& in = G.info(p);
    if (!in.undefined.empty())
      throw Error(ErrorKind::IncompleteTSS, "undefined transitions from " + P.sig.print(p));
    for (const auto& [a, q] : in.proved)
      if (a == l) out.insert(q);
    return out;
  };

  for (const auto& t : sources) {
    ++rep.sources;
    const auto vs = vars(t);
    for (const auto& label : P.labels()) {
      RuloidSet rs = E.ruloids(t, label);
      if (rs.partial) {
        rep.discrepancies.push_back("partial ruloid set for " + P.sig.print(t) + " -" + label + "->");
        continue;
      }
      for_each_subst(vs, universe, [&](const Subst& rho) {
        ++rep.instances;
        const std::set<Term> ground = moves(sosw::apply(rho, t), label);
        std::set<Term> derived;
        for (const auto& r : rs.ruloids) {
          // Extend rho over the premise targets, premise by premise.
          std::vector<Subst> ext{rho};
          for (const auto& l : r.rule.premises) {
            std::vector<Subst> next;
            for (const auto& s : ext) {
              Term lhs = sosw::apply(s, l.lhs);
              if (!l.positive) {
                if (moves(lhs, l.label).empty()) next.push_back(s);
                continue;
              }
              for (const auto& q : moves(lhs, l.label)) {
                Subst n = s;
                auto [it, fresh] = n.emplace(l.rhs.name(), q);
                if (fresh || it->second == q) next.push_back(std::move(n));
              }
            }
            ext = std::move(next);
          }
          for (const auto& s : ext) derived.insert(sosw::apply(s, r.rule.conclusion.rhs));
        }
        if (ground != derived) {
          std::string d = P.sig.print(t) + " -" + label + "-> under " + show_subst(P.sig, rho) + ": ground {";
          for (const auto& q : ground) d += " " + P.sig.print(q);
          d += " } ruloids {";
          for (const auto& q : derived) d += " " + P.sig.print(q);
          rep.discrepancies.push_back(d + " }");
        }
      });
    }
  }
  return rep;
}

DelayValidationReport validate_delay_resistance(const TSS& P, const std::vector<Term>& sources,
                                                const std::vector<Term>& universe, RuloidOptions opts,
                                                int lts_depth) {
  DelayValidationReport rep;
  GroundSemantics G(P);
  RuloidEngine E(P, opts);
  auto strong = [&](const Term& p, const std::string& l) {
    std::set<Term> out;
    for (const auto& [a, q] : G.info(p).proved)
      if (a == l) out.insert(q);
    return out;
  };
  // p =eps=> -l-> q
  std::map<std::pair<Term, std::string>, std::set<Term>> memo;
  auto delayed = [&](const Term& p, const std::string& l) -> const std::set<Term>& {
    auto key = std::make_pair(p, l);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::set<Term> seen{p}, out;
    std::deque<Term> todo{p};
    while (!todo.empty()) {
      Term u = todo.front();
      todo.pop_front();
      if (static_cast<int>(seen.size()) > lts_depth * 1000)
        throw Error(ErrorKind::BoundExceeded, "tau closure of " + P.sig.print(p) + " too large");
      for (const auto& q : strong(u, l)) out.insert(q);
      for (const auto& q : strong(u, kTau))
        if (seen.insert(q).second) todo.push_back(q);
    }
    return memo[key] = std::move(out);
  };

  for (const auto& t : sources) {
    const auto vs = vars(t);
    std::vector<std::pair<std::string, Ruloid>> rules;
    for (const auto& label : P.labels()) {
      RuloidSet rs = E.ruloids(t, label);
      if (rs.partial) {
        rep.violations.push_back("partial ruloid set for " + P.sig.print(t) + " -" + label + "->");
        continue;
      }
      for (auto& r : rs.ruloids) rules.emplace_back(label, std::move(r));
    }
    rep.ruloids += rules.size();
    std::vector<std::vector<Literal>> stables;
    for (const auto& [label, r] : rules) stables.push_back(stable_negatives(r.rule.premises));
    for_each_subst(vs, universe, [&](const Subst& rho) {
      const Term source = sosw::apply(rho, t);
      for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& [label, r] = rules[i];
        std::vector<Subst> ext{rho};
        for (const auto& l : r.rule.premises) {
          if (!l.positive) continue;
          std::vector<Subst> next;
          for (const auto& s : ext)
            for (const auto& q : delayed(sosw::apply(s, l.lhs), l.label)) {
              Subst n = s;
              auto [it, fresh] = n.emplace(l.rhs.name(), q);
              if (fresh || it->second == q) next.push_back(std::move(n));
            }
          ext = std::move(next);
          if (ext.empty()) break;
        }
        for (const auto& s : ext) {
          bool ok = true;
          for (const auto& l : stables[i]) ok = ok && strong(sosw::apply(s, l.lhs), l.label).empty();
          if (!ok) continue;
          ++rep.instances;
          Term target = sosw::apply(s, r.rule.conclusion.rhs);
          if (!delayed(source, label).count(target))
            rep.violations.push_back(print_rule(P.sig, r.rule) + " under " + show_subst(P.sig, s) + ": " +
                                     P.sig.print(source) + " has no delayed " + label + "-move to " +
                                     P.sig.print(target));
        }
      }
    });
  }
  return rep;
}

bool SuiteSummary::ok() const {
  return std::all_of(items.begin(), items.end(), [](const SuiteItem& i) { return i.ok; });
}

bool SuiteSummary::inconclusive() const {
  return std::any_of(items.begin(), items.end(), [](const SuiteItem& i) { return i.inconclusive; });
}

std::vector<SuiteItem> run_expectations(const TSS& P, const std::string& spec_name) {
  std::vector<SuiteItem> out;
  for (const auto& e : P.expectations) {
    SuiteItem item;
    item.spec = spec_name;
    try {
      switch (e.kind) {
        case Expectation::Kind::Format: {
          item.expectation = "format " + e.format + (e.markings.empty() ? "" : " markings=" + e.markings) + " " + e.result;
          const MarkingSet* m = P.find_markings(e.markings);
          if (!m) throw Error(ErrorKind::Precondition, "no marking set '" + e.markings + "'");
          FormatVerdict v = check_format(P, e.format, *m);
          item.ok = result_name(v.result) == e.result;
          item.inconclusive = v.result == Result::Inconclusive && e.result != "inconclusive";
          auto failed = v.failed_conditions();
          item.detail = result_name(v.result);
          if (!failed.empty()) {
            item.detail += " [";
            for (const auto& c : failed) item.detail += " " + c;
            item.detail += " ]";
          }
          if (e.conditions) {
            std::set<std::string> want(e.conditions->begin(), e.conditions->end());
            item.expectation += " conditions";
            for (const auto& c : want) item.expectation += " " + c;
            item.ok = item.ok && want == failed;
          }
          break;
        }
        case Expectation::Kind::Congruence: {
          item.expectation = "congruence " + equivalence_name(e.equiv) + " depth " + std::to_string(e.depth) + " clean";
          auto rep = congruence_check(P, e.equiv, e.depth, P.base);
          item.ok = rep.clean();
          item.detail = std::to_string(rep.contexts) + " contexts, " + std::to_string(rep.pairs_tested) + " pairs, " +
                        std::to_string(rep.violations.size()) + " violations";
          if (!rep.clean())
            item.detail += "; first: " + P.sig.print(rep.violations[0].left_filled) + " vs " +
                           P.sig.print(rep.violations[0].right_filled);
          break;
        }
        case Expectation::Kind::Violation: {
          item.expectation = "violation " + equivalence_name(e.equiv) + " depth " + std::to_string(e.depth) + " " +
                             P.sig.print(e.left) + " " + P.sig.print(e.right);
          auto rep = congruence_check(P, e.equiv, e.depth, P.base);
          for (const auto& v : rep.violations) {
            const bool same = (v.left_filled == e.left && v.right_filled == e.right) ||
                              (v.left_filled == e.right && v.right_filled == e.left);
            if (!same) continue;
            item.ok = e.equiv.base == EquivKind::Branching || v.witness_verified;
            item.detail = v.witness ? "witness " + v.witness->str() : "no witness";
            break;
          }
          if (item.detail.empty()) item.detail = std::to_string(rep.violations.size()) + " other violations";
          break;
        }
      }
    } catch (const Error& err) {
      item.ok = false;
      item.detail = err.what();
    }
    out.push_back(std::move(item));
  }
  return out;
}

SuiteSummary run_bundled_suite() {
  SuiteSummary s;
  for (const auto& [name, text] : bundled_specs()) {
    auto items = run_expectations(load_bundled(name), name);
    s.items.insert(s.items.end(), items.begin(), items.end());
  }
  return s;
}

}  // namespace sosw
