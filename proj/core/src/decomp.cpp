#include "sosw/decomp.hpp"

#include <algorithm>

#include "sosw/equiv.hpp"
#include "sosw/error.hpp"
#include "sosw/semantics.hpp"

namespace sosw {

Formula Mapping::at(const std::string& x) const {
  auto it = psi.find(x);
  return it == psi.end() ? Formula::top() : it->second;
}

std::string Mapping::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [x, f] : psi) {
    s += (first ? "" : ", ") + x + ": " + f.str();
    first = false;
  }
  return s + "}";
}

bool operator==(const Mapping& a, const Mapping& b) { return a.psi == b.psi; }
bool operator<(const Mapping& a, const Mapping& b) { return a.psi < b.psi; }

namespace {

using Key = std::pair<Term, std::string>;

std::vector<Formula> conjuncts_of(const Formula& f) {
  if (f.kind() == Formula::Kind::Conj) return f.kids();
  return {f};
}

// Entry after normalize; T entries are removed.
void put(Mapping& m, const std::string& x, const Formula& f) {
  Formula g = normalize(f);
  if (g.is_top())
    m.psi.erase(x);
  else
    m.psi.insert_or_assign(x, g);
}

bool contradictory(const Formula& f) {
  auto parts = conjuncts_of(f);
  std::set<Formula> have(parts.begin(), parts.end());
  for (const auto& p : parts) {
    if (p.kind() != Formula::Kind::Neg) continue;
    const Formula& n = p.sub();
    if (n.is_top() || have.count(n)) return true;
    // ~<g>T next to <g>phi
    if (n.kind() == Formula::Kind::Diamond && n.sub().is_top())
      for (const auto& q : parts)
        if (q.kind() == Formula::Kind::Diamond && q.label() == n.label()) return true;
  }
  return false;
}

// a is implied by b entrywise: every conjunct of a(x) is a conjunct of b(x).
bool weaker(const Mapping& a, const Mapping& b) {
  for (const auto& [x, f] : a.psi) {
    auto it = b.psi.find(x);
    if (it == b.psi.end()) return false;
    auto fa = conjuncts_of(f), fb = conjuncts_of(it->second);
    std::set<Formula> sb(fb.begin(), fb.end());
    for (const auto& c : fa)
      if (!sb.count(c)) return false;
  }
  return true;
}

std::vector<Mapping> prune(std::vector<Mapping> in) {
  std::erase_if(in, [](const Mapping& m) {
    return std::any_of(m.psi.begin(), m.psi.end(), [](const auto& e) { return contradictory(e.second); });
  });
  std::sort(in.begin(), in.end());
  in.erase(std::unique(in.begin(), in.end()), in.end());
  // Smaller mappings first so weaker ones are kept.
  std::stable_sort(in.begin(), in.end(), [](const Mapping& a, const Mapping& b) {
    std::size_t sa = 0, sb = 0;
    for (const auto& e : a.psi) sa += e.second.size();
    for (const auto& e : b.psi) sb += e.second.size();
    return sa < sb;
  });
  std::vector<Mapping> out;
  for (auto& m : in)
    if (std::none_of(out.begin(), out.end(), [&](const Mapping& k) { return weaker(k, m); }))
      out.push_back(std::move(m));
  std::sort(out.begin(), out.end());
  return out;
}

Mapping rename_keys(const Mapping& m, const std::map<std::string, std::string>& ren) {
  Mapping out;
  for (const auto& [x, f] : m.psi) {
    auto it = ren.find(x);
    if (it != ren.end()) out.psi.emplace(it->second, f);
  }
  return out;
}

}  // namespace

Decomposer::Decomposer(const TSS& P, ArgumentMarking gamma, DecompOptions opts)
    : P_(P), gamma_(std::move(gamma)), opts_(std::move(opts)), engine_(P, opts_.ruloids) {}

bool Decomposer::liquid(const Term& t, const std::string& x) const {
  auto occ = occurrence_liquidity(t, x, gamma_);
  return !occ.empty() && std::all_of(occ.begin(), occ.end(), [](const Occurrence& o) { return o.liquid; });
}

const std::vector<Ruloid>& Decomposer::linear(const Term& t, const std::string& label) {
  Key key{t, label};
  auto it = ruloid_memo_.find(key);
  if (it != ruloid_memo_.end()) return it->second;
  RuloidSet rs = engine_.linear_ruloids(t, label);
  if (rs.partial)
    throw Error(ErrorKind::PartialRuloids, "ruloids for " + P_.sig.print(t) + " -" + label + "-> are incomplete");
  return ruloid_memo_.emplace(key, std::move(rs.ruloids)).first->second;
}

std::vector<Mapping> Decomposer::decompose(const Term& t, const Formula& phi) {
  // Canonical variable names v1, v2, ... in first-occurrence order.
  std::map<std::string, std::string> back;
  Subst to_canon;
  int k = 0;
  for (const auto& x : vars(t)) {
    std::string v = "v" + std::to_string(++k);
    to_canon[x] = Term::var(v);
    back[v] = x;
  }
  Term c = sosw::apply(to_canon, t);
  Key key{c, phi.str()};

  std::vector<Mapping> result;
  if (auto it = memo_.find(key); it != memo_.end()) {
    result = it->second;
  } else if (active_.count(key)) {
    cycle_hits_.insert(key);
    result = approx_[key];
  } else {
    active_.insert(key);
    for (int round = 0;; ++round) {
      cycle_hits_.erase(key);
      result = compute(c, phi);
      if (!cycle_hits_.count(key)) break;
      if (result == approx_[key]) {
        cycle_hits_.erase(key);
        break;
      }
      if (round + 1 >= opts_.fixpoint_rounds) {
        active_.erase(key);
        throw Error(ErrorKind::InfiniteDecomposition,
                    "no fixpoint for " + P_.sig.print(t) + " and " + phi.str() + " after " +
                        std::to_string(opts_.fixpoint_rounds) + " rounds");
      }
      approx_[key] = result;
    }
    active_.erase(key);
    approx_.erase(key);
    // Results that read an approximation of an enclosing pair are provisional.
    bool pending = std::any_of(cycle_hits_.begin(), cycle_hits_.end(), [&](const Key& h) { return active_.count(h); });
    if (!pending) memo_.emplace(key, result);
  }
  std::vector<Mapping> out;
  out.reserve(result.size());
  for (const auto& m : result) out.push_back(rename_keys(m, back));
  return out;
}

std::vector<Mapping> Decomposer::compute(const Term& t, const Formula& phi) {
  if (is_univariate(t)) return univariate(t, phi);
  // Split repeated variables apart, then conjoin the entries of the copies.
  std::map<std::string, std::string> origin;
  std::set<std::string> avoid;
  collect_vars(t, avoid);
  std::size_t total = 0;
  for (const auto& x : avoid) total += count_occurrences(x, t);
  auto fresh = fresh_variables(avoid, total, "w");
  std::size_t next = 0;
  std::function<Term(const Term&)> split = [&](const Term& s) -> Term {
    if (s.is_var()) {
      const std::string& z = fresh[next++];
      origin[z] = s.name();
      return Term::var(z);
    }
    std::vector<Term> args;
    for (const auto& a : s.args()) args.push_back(split(a));
    return Term::app(s.name(), std::move(args));
  };
  Term u = split(t);
  std::vector<Mapping> out;
  for (const auto& chi : decompose(u, phi)) {
    std::map<std::string, std::vector<Formula>> parts;
    for (const auto& [z, f] : chi.psi) parts[origin.at(z)].push_back(f);
    Mapping m;
    for (auto& [x, fs] : parts) put(m, x, Formula::conj(fs));
    out.push_back(std::move(m));
  }
  return prune(std::move(out));
}

Mapping Decomposer::step(const Term& t, const Rule& r, const Mapping& chi, bool wrap, bool dr) const {
  // wrap: prefix <eps> for gamma-liquid variables.
  // dr: premises as <eps><b>, only stable negative premises.
  const bool eps_premises = dr && !(opts_.mutate_drop_eps && !wrap);
  std::vector<Literal> negatives = dr ? stable_negatives(r.premises) : r.negative_premises();
  Mapping psi;
  for (const auto& x : vars(t)) {
    std::vector<Formula> parts{chi.at(x)};
    for (const auto& l : r.premises) {
      if (!l.positive || l.lhs != Term::var(x)) continue;
      Formula d = Formula::diamond(l.label, chi.at(l.rhs.name()));
      parts.push_back(eps_premises ? Formula::eps(d) : d);
    }
    for (const auto& l : negatives)
      if (l.lhs == Term::var(x)) parts.push_back(Formula::neg(Formula::diamond(l.label, Formula::top())));
    Formula body = Formula::conj(std::move(parts));
    put(psi, x, wrap && liquid(t, x) ? Formula::eps(body) : body);
  }
  return psi;
}

std::vector<Mapping> Decomposer::univariate(const Term& t, const Formula& phi) {
  switch (phi.kind()) {
    case Formula::Kind::Conj: {
      std::vector<Mapping> acc{Mapping{}};
      for (const auto& part : phi.kids()) {
        auto sub = decompose(t, part);
        std::vector<Mapping> next;
        if (acc.size() * sub.size() > opts_.negation_cap)
          throw Error(ErrorKind::CapExceeded, "conjunction decomposition exceeds the cap");
        for (const auto& a : acc)
          for (const auto& b : sub) {
            Mapping m = a;
            for (const auto& [x, f] : b.psi) put(m, x, Formula::conj({m.at(x), f}));
            next.push_back(std::move(m));
          }
        acc = prune(std::move(next));
        if (acc.empty()) break;
      }
      return acc;
    }
    case Formula::Kind::Neg: return negation(t, decompose(t, phi.sub()));
    case Formula::Kind::Diamond: {
      std::vector<Mapping> out;
      for (const auto& r : linear(t, phi.label()))
        for (const auto& chi : decompose(r.rule.conclusion.rhs, phi.sub())) out.push_back(step(t, r.rule, chi, false, false));
      return prune(std::move(out));
    }
    case Formula::Kind::Eps: return opts_.delay_resistant ? epsilon_dr(t, phi.sub()) : epsilon(t, phi.sub());
  }
  return {};
}

std::vector<Mapping> Decomposer::negation(const Term& t, const std::vector<Mapping>& inner) {
  const auto vs = vars(t);
  // A mapping of the result picks, for every chi in inner, one variable x
  // with chi(x) != T and requires ~chi(x) there. Only minimal choice sets
  // matter, so they are built incrementally as hitting sets.
  using Choice = std::set<std::pair<std::string, Formula>>;
  std::vector<std::vector<std::pair<std::string, Formula>>> options;
  for (const auto& chi : inner) {
    std::vector<std::pair<std::string, Formula>> c;
    for (const auto& x : vs)
      if (chi.psi.count(x)) c.emplace_back(x, chi.at(x));
    if (c.empty()) return {};
    options.push_back(std::move(c));
  }
  std::sort(options.begin(), options.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<Choice> partial{Choice{}};
  for (const auto& opt : options) {
    std::set<Choice> next;
    for (const auto& c : partial) {
      bool hit = std::any_of(opt.begin(), opt.end(), [&](const auto& e) { return c.count(e) != 0; });
      if (hit) {
        next.insert(c);
        continue;
      }
      for (const auto& e : opt) {
        Choice d = c;
        d.insert(e);
        next.insert(std::move(d));
      }
    }
    // Drop choice sets that contain a smaller one.
    std::vector<Choice> sorted(next.begin(), next.end());
    std::sort(sorted.begin(), sorted.end(), [](const Choice& a, const Choice& b) { return a.size() < b.size(); });
    partial.clear();
    for (auto& c : sorted) {
      bool dominated = std::any_of(partial.begin(), partial.end(), [&](const Choice& k) {
        return std::includes(c.begin(), c.end(), k.begin(), k.end());
      });
      if (!dominated) partial.push_back(std::move(c));
    }
    if (partial.size() > opts_.negation_cap)
      throw Error(ErrorKind::CapExceeded, "negation needs more than " + std::to_string(opts_.negation_cap) +
                                              " choice sets for " + P_.sig.print(t));
  }
  std::vector<Mapping> out;
  for (const auto& c : partial) {
    std::map<std::string, std::vector<Formula>> parts;
    for (const auto& [x, f] : c) parts[x].push_back(Formula::neg(f));
    Mapping m;
    for (auto& [x, fs] : parts) put(m, x, Formula::conj(std::move(fs)));
    out.push_back(std::move(m));
  }
  return prune(std::move(out));
}

std::vector<Mapping> Decomposer::epsilon(const Term& t, const Formula& phi) {
  std::vector<Mapping> out;
  for (const auto& chi : decompose(t, phi)) {
    Mapping m;
    for (const auto& x : vars(t)) put(m, x, liquid(t, x) ? Formula::eps(chi.at(x)) : chi.at(x));
    out.push_back(std::move(m));
  }
  const Formula again = Formula::eps(phi);
  for (const auto& r : linear(t, kTau)) {
    if (is_gamma_patient_rule(r.rule, gamma_)) continue;
    for (const auto& chi : decompose(r.rule.conclusion.rhs, again)) out.push_back(step(t, r.rule, chi, true, false));
  }
  return prune(std::move(out));
}

std::vector<Mapping> Decomposer::epsilon_dr(const Term& t, const Formula& phi) {
  std::vector<Mapping> out;
  const bool diamond = phi.kind() == Formula::Kind::Diamond;
  const bool tau_diamond = diamond && phi.label() == kTau;
  if (!diamond)
    for (const auto& chi : decompose(t, phi)) {
      Mapping m;
      for (const auto& x : vars(t)) put(m, x, liquid(t, x) ? Formula::eps(chi.at(x)) : chi.at(x));
      out.push_back(std::move(m));
    }
  // Gamma-impatient tau ruloids: keep waiting for phi, or consume <tau>.
  const Formula next = tau_diamond ? Formula::eps(phi.sub()) : Formula::eps(phi);
  for (const auto& r : linear(t, kTau)) {
    if (is_gamma_patient_rule(r.rule, gamma_)) continue;
    for (const auto& chi : decompose(r.rule.conclusion.rhs, next)) out.push_back(step(t, r.rule, chi, true, true));
  }
  if (diamond) {
    const bool mutate = opts_.mutate_drop_eps;
    for (const auto& r : linear(t, phi.label()))
      for (const auto& chi : decompose(r.rule.conclusion.rhs, phi.sub()))
        out.push_back(step(t, r.rule, chi, !mutate, true));
  }
  return prune(std::move(out));
}

std::vector<Mapping> decompose(const TSS& P, const Term& t, const Formula& phi, const ArgumentMarking& gamma,
                               DecompOptions opts) {
  opts.delay_resistant = false;
  return Decomposer(P, gamma, opts).decompose(t, phi);
}

std::vector<Mapping> decompose_dr(const TSS& P, const Term& t, const Formula& phi, const ArgumentMarking& gamma,
                                  DecompOptions opts) {
  opts.delay_resistant = true;
  return Decomposer(P, gamma, opts).decompose(t, phi);
}

namespace {

// All maps from the variables to the base terms.
std::vector<Subst> substitutions(const std::vector<std::string>& vs, const std::vector<Term>& base) {
  std::vector<Subst> out{Subst{}};
  for (const auto& x : vs) {
    std::vector<Subst> next;
    for (const auto& s : out)
      for (const auto& b : base) {
        Subst n = s;
        n[x] = b;
        next.push_back(std::move(n));
      }
    out = std::move(next);
  }
  return out;
}

}  // namespace

TheoremReport verify_decomposition_theorem(const TSS& P, const std::vector<Term>& terms,
                                           const std::vector<Formula>& formulas, const std::vector<Term>& base,
                                           const ArgumentMarking& gamma, DecompOptions opts, int lts_depth) {
  TheoremReport rep;
  std::vector<Term> roots = base;
  for (const auto& t : terms)
    for (const auto& rho : substitutions(vars(t), base)) roots.push_back(sosw::apply(rho, t));
  GeneratedLTS g = generate_lts(P, roots, lts_depth);
  // Mapping entries are only evaluated on the base, which gets its own
  // (much smaller) LTS.
  GeneratedLTS gb = generate_lts(P, base, lts_depth);
  if (g.partial || gb.partial)
    throw Error(ErrorKind::BoundExceeded, "process LTS not explored within depth " + std::to_string(lts_depth));
  ModelChecker mc(g.lts), mcb(gb.lts);
  Decomposer D(P, gamma, opts);
  auto state = [&](const Term& p) { return *g.lts.find(p); };
  auto base_state = [&](const Term& p) { return *gb.lts.find(p); };

  for (const auto& t : terms) {
    const auto vs = vars(t);
    const auto rhos = substitutions(vs, base);
    for (const auto& phi : formulas) {
      const auto maps = D.decompose(t, phi);
      rep.mappings += maps.size();
      for (const auto& rho : rhos) {
        ++rep.checks;
        const bool lhs = mc.satisfies(state(sosw::apply(rho, t)), phi);
        bool rhs = false;
        for (const auto& m : maps) {
          bool all = true;
          for (const auto& x : vs) all = all && mcb.satisfies(base_state(rho.at(x)), m.at(x));
          if (all) {
            rhs = true;
            break;
          }
        }
        if (lhs != rhs) rep.mismatches.push_back({t, phi, rho, lhs, rhs});
      }
    }
  }
  return rep;
}

PreservationReport verify_class_preservation(const TSS& P, const MarkingSet& m, const std::vector<Term>& terms,
                                             const std::vector<Formula>& formulas, FormulaClass cls, int samples,
                                             std::uint64_t seed, DecompOptions opts) {
  PreservationReport rep;
  opts.delay_resistant = true;
  Decomposer D(P, m.gamma(), opts);
  const bool weak = cls == FormulaClass::Ow || cls == FormulaClass::Orw;
  const bool rooted_cls = cls == FormulaClass::Ord || cls == FormulaClass::Orw;
  const EquivKind base = weak ? EquivKind::Weak : EquivKind::Delay;

  std::vector<LTS> battery;
  std::vector<Partition> unrooted, rooted;
  for (int i = 0; i < samples; ++i) {
    battery.push_back(random_lts(seed + static_cast<std::uint64_t>(i), 10, P.actions, 3));
    unrooted.push_back(equivalence(battery.back(), {base, false}));
    rooted.push_back(equivalence(battery.back(), {base, true}));
  }
  std::vector<ModelChecker> checkers;
  for (const auto& L : battery) checkers.emplace_back(L);

  for (const auto& t : terms)
    for (const auto& phi : formulas) {
      if (!in_class(phi, cls)) continue;
      for (const auto& map : D.decompose(t, phi))
        for (const auto& x : vars(t)) {
          auto occ = occurrence_liquidity(t, x, m.lambda);
          const bool lam_liquid =
              std::all_of(occ.begin(), occ.end(), [](const Occurrence& o) { return o.liquid; });
          const bool use_rooted = rooted_cls || !lam_liquid;
          const FormulaClass expect =
              use_rooted ? (weak ? FormulaClass::Orw : FormulaClass::Ord) : (weak ? FormulaClass::Ow : FormulaClass::Od);
          const Formula f = map.at(x);
          ++rep.formulas_checked;
          if (in_class(normalize(f), expect)) ++rep.syntactic;
          for (std::size_t i = 0; i < battery.size(); ++i) {
            const Partition& part = use_rooted ? rooted[i] : unrooted[i];
            const auto& sat = checkers[i].eval(f);
            for (std::size_t p = 0; p < battery[i].size(); ++p)
              for (std::size_t q = p + 1; q < battery[i].size(); ++q) {
                if (!part.same(static_cast<int>(p), static_cast<int>(q))) continue;
                ++rep.pairs_checked;
                if (sat[p] != sat[q])
                  rep.violations.push_back(P.sig.print(t) + " " + phi.str() + " " + x + ": " + f.str() +
                                           " separates s" + std::to_string(p) + " and s" + std::to_string(q) +
                                           " of sample " + std::to_string(i));
              }
          }
        }
    }
  return rep;
}

}  // namespace sosw
