// Acceptance runner. Prints one line per criterion; with an argument N only
// criterion N runs. Exit status is 0 when every criterion passes, or fails
// only for a documented, unattainable part while its attainable part passes.
#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sosw/decomp.hpp"
#include "sosw/dsl.hpp"
#include "sosw/equiv.hpp"
#include "sosw/format.hpp"
#include "sosw/harness.hpp"
#include "sosw/lts.hpp"
#include "sosw/modal.hpp"
#include "sosw/ruloid.hpp"
#include "sosw/semantics.hpp"

using namespace sosw;

namespace {

struct Outcome {
  bool pass = true;
  bool known_gap = false;  // fails for a reason outside the tool's reach
  std::vector<std::string> problems;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      pass = false;
      problems.push_back(what);
    }
  }
};

ArgumentMarking marking(const std::string& name, std::set<std::pair<std::string, int>> args) {
  return ArgumentMarking{name, std::move(args)};
}

Outcome criterion1() {
  Outcome o;
  int verdicts = 0;
  auto expect = [&](const TSS& P, const std::string& format, const MarkingSet& m, Result want,
                    std::optional<std::set<std::string>> conds = std::nullopt) {
    FormatVerdict v = check_format(P, format, m);
    ++verdicts;
    o.require(v.result == want, P.name + " " + format + ": got " + result_name(v.result));
    if (conds) {
      auto got = v.failed_conditions();
      std::string s;
      for (const auto& c : got) s += c + " ";
      o.require(got == *conds, P.name + " " + format + ": failed conditions " + s);
    }
    return v;
  };

  TSS bpa = load_bundled("bpa");
  MarkingSet mb;
  mb.aleph = marking("aleph", {{"alt", 1}, {"alt", 2}, {"seq", 1}, {"seq", 2}});
  mb.lambda = marking("lambda", {{"seq", 1}});
  expect(bpa, "syntactic-rooted-delay", mb, Result::Pass);
  expect(bpa, "syntactic-rooted-weak", mb, Result::Pass);

  TSS kleene = load_bundled("kleene");
  MarkingSet mk;
  mk.aleph = marking("aleph", {{"alt", 1}, {"alt", 2}, {"seq", 1}, {"seq", 2}, {"star", 1}, {"star", 2}});
  mk.lambda = marking("lambda", {{"seq", 1}});
  for (const auto& l : kleene.labels())
    if (l != "ok") mk.delta[l] = marking("delta", {{"seq", 1}});
  expect(kleene, "syntactic-rooted-delay", mk, Result::Pass);
  expect(kleene, "syntactic-rooted-weak", mk, Result::Pass);

  TSS prio = load_bundled("priority");
  const MarkingSet& mp = *prio.find_markings("");
  expect(prio, "syntactic-rooted-delay", mp, Result::Pass);
  expect(prio, "syntactic-rooted-weak", mp, Result::Pass);
  for (const auto& r : prio.rules)
    o.require(check_negative_stable(r).passed(), "priority rule " + r.name + " not negative-stable");

  TSS dead = load_bundled("deadlock");
  const MarkingSet& md = *dead.find_markings("");
  FormatVerdict v = expect(dead, "syntactic-rooted-delay", md, Result::Fail);
  bool cond3 = false;
  for (const auto& c : v.failed_conditions()) cond3 = cond3 || c.rfind("syn-3", 0) == 0;
  o.require(cond3, "deadlock does not fail syntactic condition 3");
  expect(dead, "manifest-rooted-delay", md, Result::Pass);

  TSS s = load_bundled("s_operator");
  expect(s, "syntactic-delay", *s.find_markings(""), Result::Fail, std::set<std::string>{"cond-5"});

  o.detail = std::to_string(verdicts) + " verdicts";
  return o;
}

// Finds the violation for the stated pair and re-checks its witness on a
// freshly generated LTS.
void reproduce(Outcome& o, const std::string& spec, const std::string& kind_name, const std::string& left,
               const std::string& right, int& found) {
  TSS P = load_bundled(spec);
  EquivalenceKind kind = *parse_equivalence(kind_name);
  Term l = parse_term(P.sig, left, true), r = parse_term(P.sig, right, true);
  CongruenceReport rep = congruence_check(P, kind, 1, P.base);
  for (const auto& v : rep.violations) {
    bool same = (v.left_filled == l && v.right_filled == r) || (v.left_filled == r && v.right_filled == l);
    if (!same) continue;
    o.require(v.witness.has_value(), spec + ": violation without witness");
    if (!v.witness) return;
    GeneratedLTS G = generate_lts(P, {v.left_filled, v.right_filled}, 64);
    int sl = *G.lts.find(v.left_filled), sr = *G.lts.find(v.right_filled);
    ModelChecker mc(G.lts);
    bool ok = v.witness_verified && mc.satisfies(sl, *v.witness) && !mc.satisfies(sr, *v.witness) &&
              in_class(*v.witness, class_for(kind));
    o.require(ok, spec + ": witness " + v.witness->str() + " does not verify");
    ++found;
    return;
  }
  o.require(false, spec + ": no " + kind_name + " violation for " + left + " / " + right);
}

Outcome criterion2() {
  Outcome o;
  int found = 0;
  reproduce(o, "counter_negative", "rooted-delay", "f(p0)", "f(p1)", found);
  reproduce(o, "counter_positive", "rooted-delay", "f(p0)", "f(p1)", found);
  reproduce(o, "counter_eta", "rooted-weak", "f(p0)", "f(p1)", found);
  reproduce(o, "priority_tau_low", "rooted-weak", "theta(tau . a)", "theta((tau . a) + a)", found);

  // The stated transition facts.
  {
    TSS P = load_bundled("counter_negative");
    GeneratedLTS G = generate_lts(P, P.base, 16);
    auto st = [&](const std::string& t) { return *G.lts.find(parse_term(P.sig, t, true)); };
    o.require(equivalence(G.lts, *parse_equivalence("rooted-delay")).same(st("p0"), st("p1")),
              "p0 and p1 not rooted delay bisimilar");
    GeneratedLTS H = generate_lts(P, {parse_term(P.sig, "f(p0)", true), parse_term(P.sig, "f(p1)", true)}, 4);
    auto fs = [&](const std::string& t) { return *H.lts.find(parse_term(P.sig, t, true)); };
    o.require(H.lts.out(fs("f(p0)")).empty(), "f(p0) has transitions");
    bool b = false;
    for (const auto& [l, q] : H.lts.out(fs("f(p1)"))) b = b || (l == "b" && H.lts.name(q) == "nil");
    o.require(b, "f(p1) has no b-step to nil");
  }
  {
    TSS P = load_bundled("counter_eta");
    GeneratedLTS G = generate_lts(P, P.base, 16);
    auto st = [&](const std::string& t) { return *G.lts.find(parse_term(P.sig, t, true)); };
    o.require(equivalence(G.lts, *parse_equivalence("rooted-weak")).same(st("p0"), st("p1")),
              "p0 and p1 not rooted weak bisimilar");
    o.require(!equivalence(G.lts, *parse_equivalence("rooted-delay")).same(st("p0"), st("p1")),
              "p0 and p1 unexpectedly rooted delay bisimilar");
  }

  // The remaining example needs infinitely many actions and function
  // symbols; every finite truncation is delay resistant, so no violation
  // exists to find.
  o.known_gap = true;
  o.require(false, "infinite-alphabet example not representable (finite signatures only)");
  o.detail = std::to_string(found) + " violations reproduced (3 of 4 examples plus tau<a), witnesses verified";
  return o;
}

std::vector<Formula> ord_formulas() {
  std::vector<std::string> src = {
      "<eps><a>T",  // <eps><a>phi
      "<eps><tau>T",  // <eps><tau>phi, rooted only
      "<eps><tau><eps><b>T",
      "<eps><a><eps><ok>T",
      "~<eps><b>T",  // negation
      "/\\[<eps><a>T, <eps><b>T]",  // conjunction
      "/\\[~<eps><tau>T, <eps><a>T]",
      "~/\\[<eps><a>T, ~<eps><ok>T]",
      "<eps>~<eps><a>T",  // <eps>phi from the delay class
      "<eps><ok>T",
      "<eps><b>~<eps><a>T",
      "<eps><tau>/\\[~<eps><a>T, <eps><b>T]",
  };
  std::vector<Formula> out;
  for (const auto& s : src) out.push_back(parse_formula(s));
  return out;
}

std::vector<Term> bpa_terms(const TSS& P) {
  std::vector<Term> terms = open_terms(P.sig, 2);
  for (const char* s : {"tau . x1", "x1 . tau", "(tau . x1) + x2", "a . x1", "x1 . (tau . x2)", "x1 + tau"})
    terms.push_back(parse_term(P.sig, s));
  return terms;
}

Outcome criterion3() {
  Outcome o;
  TSS P = load_bundled("bpa");
  ArgumentMarking gamma = P.find_markings("")->gamma();
  std::vector<Term> base;
  for (const char* s : {"eps", "delta", "tau . a", "(tau . eps) + b", "a + (tau . b)"})
    base.push_back(parse_term(P.sig, s, true));
  auto formulas = ord_formulas();
  bool covers[4] = {false, false, false, false};
  for (const auto& f : formulas) {
    o.require(in_class(f, FormulaClass::Ord), "formula outside O_rd: " + f.str());
    switch (f.kind()) {
      case Formula::Kind::Conj: covers[0] = true; break;
      case Formula::Kind::Neg: covers[1] = true; break;
      case Formula::Kind::Eps:
        (f.sub().kind() == Formula::Kind::Diamond ? covers[2] : covers[3]) = true;
        break;
      default: break;
    }
  }
  o.require(covers[0] && covers[1] && covers[2] && covers[3], "formulas do not span the four productions");

  DecompOptions opts;
  opts.delay_resistant = true;
  auto terms = bpa_terms(P);
  TheoremReport rep = verify_decomposition_theorem(P, terms, formulas, base, gamma, opts);
  o.require(rep.ok(), std::to_string(rep.mismatches.size()) + " mismatches");
  for (std::size_t i = 0; i < rep.mismatches.size() && i < 3; ++i) {
    const auto& m = rep.mismatches[i];
    o.problems.push_back("  " + P.sig.print(m.term) + " " + m.formula.str());
  }

  // Without the <eps> prefixes the negations stop collapsing, so the
  // mutation runs on the shallow terms only; one mismatch is enough.
  opts.mutate_drop_eps = true;
  std::vector<Term> shallow;
  for (const auto& t : terms)
    if (t.depth() <= 1) shallow.push_back(t);
  TheoremReport mut = verify_decomposition_theorem(P, shallow, formulas, base, gamma, opts);
  o.require(!mut.ok(), "mutation run found no mismatch");
  o.detail = std::to_string(terms.size()) + " terms, " + std::to_string(formulas.size()) + " formulas, " +
             std::to_string(rep.checks) + " checks, 0 mismatches; mutation: " +
             std::to_string(mut.mismatches.size()) + " mismatches";
  if (!rep.ok()) o.detail = std::to_string(rep.mismatches.size()) + " mismatches";
  return o;
}

constexpr int kRandomLts = 200;

const std::vector<EquivalenceKind>& weak_kinds() {
  static const std::vector<EquivalenceKind> k = {
      {EquivKind::Delay, false}, {EquivKind::Delay, true}, {EquivKind::Weak, false}, {EquivKind::Weak, true}};
  return k;
}

Outcome criterion4() {
  Outcome o;
  std::size_t states = 0;
  for (int i = 0; i < kRandomLts; ++i) {
    LTS L = random_lts(1000 + i, 12, 3);
    states += L.size();
    for (const auto& k : weak_kinds())
      o.require(equivalence(L, k) == oracle_bisimilarity(L, k),
                "seed " + std::to_string(1000 + i) + " " + equivalence_name(k) + ": fixpoint and oracle differ");
    Partition strong = bisimilarity(L, EquivKind::Strong);
    Partition delay = bisimilarity(L, EquivKind::Delay), weak = bisimilarity(L, EquivKind::Weak);
    Partition rdelay = equivalence(L, {EquivKind::Delay, true}), rweak = equivalence(L, {EquivKind::Weak, true});
    o.require(strong.refines(delay) && delay.refines(weak), "seed " + std::to_string(1000 + i) + ": chain broken");
    o.require(strong.refines(rdelay) && rdelay.refines(rweak) && rdelay.refines(delay) && rweak.refines(weak),
              "seed " + std::to_string(1000 + i) + ": rooted chain broken");
  }
  o.detail = std::to_string(kRandomLts) + " LTSs, " + std::to_string(states) + " states";
  return o;
}

Outcome criterion5() {
  Outcome o;
  std::size_t formulas = 0, pairs = 0;
  for (int i = 0; i < kRandomLts; ++i) {
    LTS L = random_lts(1000 + i, 12, 3);
    ModelChecker mc(L);
    for (const auto& k : weak_kinds()) {
      Partition part = equivalence(L, k);
      FormulaClass c = class_for(k);
      for (std::size_t p = 0; p < L.size(); ++p)
        for (std::size_t q = 0; q < L.size(); ++q) {
          ++pairs;
          auto f = distinguishing_formula(L, static_cast<int>(p), static_cast<int>(q), c);
          bool eq = part.same(static_cast<int>(p), static_cast<int>(q));
          std::string where = "seed " + std::to_string(1000 + i) + " " + class_name(c) + " (" +
                              std::to_string(p) + "," + std::to_string(q) + ")";
          if (eq) {
            o.require(!f, where + ": formula for equivalent pair");
            continue;
          }
          o.require(f.has_value(), where + ": no formula for inequivalent pair");
          if (!f) continue;
          ++formulas;
          o.require(in_class(*f, c), where + ": " + f->str() + " outside class");
          o.require(mc.satisfies(static_cast<int>(p), *f) && !mc.satisfies(static_cast<int>(q), *f),
                    where + ": " + f->str() + " does not distinguish");
        }
    }
    if (o.problems.size() > 20) break;
  }
  o.detail = std::to_string(pairs) + " pairs, " + std::to_string(formulas) + " formulas verified";
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::size_t instances = 0, sources = 0;
  auto run = [&](const std::string& spec, std::vector<std::string> universe_src) {
    TSS P = load_bundled(spec);
    std::vector<Term> universe;
    for (const auto& s : universe_src) universe.push_back(parse_term(P.sig, s, true));
    std::vector<Term> src = open_terms(P.sig, 2);
    for (const auto& c : P.sig.constants()) src.push_back(Term::app(c.name));
    CorrespondenceReport rep = check_ruloid_correspondence(P, src, universe);
    instances += rep.instances;
    sources += rep.sources;
    o.require(rep.ok(), spec + ": " + std::to_string(rep.discrepancies.size()) + " discrepancies");
    for (std::size_t i = 0; i < rep.discrepancies.size() && i < 3; ++i) o.problems.push_back("  " + rep.discrepancies[i]);
  };
  run("bpa", {"eps", "delta", "a", "tau . b"});
  run("linearity", {"nil", "ka", "kbc", "kta"});

  TSS P = load_bundled("linearity");
  RuloidEngine E(P);
  RuloidSet rs = E.ruloids(parse_term(P.sig, "g(f(x))"), "d");
  Rule lin = parse_rule(P, "x -a-> y1, x -a-> y2 |- g(f(x)) -d-> f(x)");
  Rule nonlin = parse_rule(P, "x -a-> y1 |- g(f(x)) -d-> f(x)");
  int seen = 0;
  for (const auto& r : rs.ruloids) {
    Rule c = canonical_ruloid(r.rule);
    if (c.same_shape(canonical_ruloid(lin))) {
      ++seen;
      o.require(r.linear, "g(f(x)) two-premise ruloid not tagged linear");
    } else if (c.same_shape(canonical_ruloid(nonlin))) {
      ++seen;
      o.require(!r.linear, "g(f(x)) one-premise ruloid tagged linear");
    }
  }
  o.require(seen == 2 && rs.ruloids.size() == 2, "g(f(x)) -d-> ruloids are not exactly the stated pair");
  o.detail = std::to_string(sources) + " sources, " + std::to_string(instances) + " instances, 0 discrepancies";
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::size_t ruloids = 0, instances = 0;
  for (const char* spec : {"deadlock", "kleene"}) {
    TSS P = load_bundled(spec);
    std::vector<Term> src = open_terms(P.sig, 2);
    DelayValidationReport rep = validate_delay_resistance(P, src, P.base);
    ruloids += rep.ruloids;
    instances += rep.instances;
    o.require(rep.ok(), std::string(spec) + ": " + std::to_string(rep.violations.size()) + " violations");
    for (std::size_t i = 0; i < rep.violations.size() && i < 3; ++i) o.problems.push_back("  " + rep.violations[i]);
  }
  o.detail = std::to_string(ruloids) + " ruloids, " + std::to_string(instances) + " delayed instances";
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "format verdict table", 10, criterion1},
      {2, "counterexample reproduction", 30, criterion2},
      {3, "decomposition theorem brute force", 300, criterion3},
      {4, "equivalence oracle agreement", 120, criterion4},
      {5, "modal characterization", 180, criterion5},
      {6, "ruloid correspondence", 60, criterion6},
      {7, "delay-resistance validation", 60, criterion7},
  };
  int only = argc > 1 ? std::atoi(argv[1]) : 0;
  bool ok = true;
  for (const auto& c : all) {
    if (only && c.id != only) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_s) o.require(false, "over the time limit");
    std::ostringstream line;
    line << "criterion " << c.id << " (" << c.title << "): " << (o.pass ? "PASS" : "FAIL") << "  ["
         << static_cast<int>(secs * 1000) / 1000.0 << " s] " << o.detail;
    std::cout << line.str() << "\n";
    for (const auto& p : o.problems) std::cout << "    " << p << "\n";
    // A known gap is tolerated only when it is the sole problem.
    bool tolerated = !o.pass && o.known_gap && o.problems.size() == 1;
    if (!o.pass && !tolerated) ok = false;
  }
  return ok ? 0 : 1;
}
