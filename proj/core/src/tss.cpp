#include "sosw/tss.hpp"

#include <algorithm>
#include <functional>

#include "sosw/error.hpp"

namespace sosw {

std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
  if (auto c = a.lhs <=> b.lhs; c != 0) return c;
  if (auto c = a.label <=> b.label; c != 0) return c;
  // positive premises before negative ones
  if (a.positive != b.positive) return a.positive ? std::strong_ordering::less : std::strong_ordering::greater;
  if (!a.positive) return std::strong_ordering::equal;
  return a.rhs <=> b.rhs;
}

Literal apply(const Subst& s, const Literal& l) {
  Literal out = l;
  out.lhs = sosw::apply(s, l.lhs);
  if (l.positive) out.rhs = sosw::apply(s, l.rhs);
  return out;
}

bool denies(const Literal& a, const Literal& b) {
  return a.positive != b.positive && a.lhs == b.lhs && a.label == b.label;
}

void Rule::normalize() {
  std::sort(premises.begin(), premises.end());
  premises.erase(std::unique(premises.begin(), premises.end()), premises.end());
}

std::vector<Literal> Rule::positive_premises() const {
  std::vector<Literal> out;
  for (const auto& l : premises)
    if (l.positive) out.push_back(l);
  return out;
}

std::vector<Literal> Rule::negative_premises() const {
  std::vector<Literal> out;
  for (const auto& l : premises)
    if (!l.positive) out.push_back(l);
  return out;
}

Rule apply(const Subst& s, const Rule& r) {
  Rule out;
  out.name = r.name;
  for (const auto& l : r.premises) out.premises.push_back(sosw::apply(s, l));
  out.conclusion = sosw::apply(s, r.conclusion);
  out.normalize();
  return out;
}

std::set<std::string> rule_vars(const Rule& r) {
  std::set<std::string> out;
  auto lit = [&](const Literal& l) {
    collect_vars(l.lhs, out);
    if (l.positive) collect_vars(l.rhs, out);
  };
  for (const auto& l : r.premises) lit(l);
  lit(r.conclusion);
  return out;
}

namespace {

Subst renaming_for(const std::vector<std::string>& order, std::size_t nsource, bool keep_source) {
  Subst s;
  if (!keep_source) {
    for (std::size_t i = 0; i < order.size(); ++i) s[order[i]] = Term::var("v" + std::to_string(i));
    return s;
  }
  std::set<std::string> src(order.begin(), order.begin() + nsource);
  std::size_t k = 1;
  for (std::size_t i = nsource; i < order.size(); ++i) {
    std::string n;
    do n = "y" + std::to_string(k++);
    while (src.count(n));
    s[order[i]] = Term::var(n);
  }
  return s;
}

void push_vars(const Term& t, std::vector<std::string>& order, std::set<std::string>& seen) {
  for (const auto& v : vars(t))
    if (seen.insert(v).second) order.push_back(v);
}

}  // namespace

Rule alpha_normal(const Rule& r, bool keep_source, Subst* renaming) {
  // Source variables are fixed by first occurrence. Premises are then visited
  // in an order that does not depend on the names of their rhs variables;
  // ties between premises sharing (lhs, label, polarity) are broken by trying
  // every permutation and keeping the smallest result.
  std::vector<std::string> base;
  std::set<std::string> seen;
  push_vars(r.conclusion.lhs, base, seen);

  Subst pre;
  for (std::size_t i = 0; i < base.size(); ++i) pre[base[i]] = Term::var("#s" + std::to_string(i));
  struct Item {
    Literal key;  // premise with only source variables renamed
    Literal orig;
  };
  std::vector<Item> items;
  for (const auto& l : r.premises) {
    Literal k = sosw::apply(pre, l);
    if (k.positive) k.rhs = Term();  // rhs names must not influence the order
    items.push_back({k, l});
  }
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.key.lhs != b.key.lhs) return a.key.lhs < b.key.lhs;
    if (a.key.label != b.key.label) return a.key.label < b.key.label;
    return a.key.positive > b.key.positive;
  });

  // Group tied items.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < items.size();) {
    std::size_t j = i + 1;
    while (j < items.size() && items[j].key.lhs == items[i].key.lhs && items[j].key.label == items[i].key.label &&
           items[j].key.positive == items[i].key.positive)
      ++j;
    groups.push_back({i, j});
    i = j;
  }

  std::optional<Rule> best;
  Subst best_s;
  std::string best_key;
  std::size_t budget = 5040;
  std::function<void(std::size_t)> rec = [&](std::size_t g) {
    if (budget == 0) return;
    if (g == groups.size()) {
      --budget;
      std::vector<std::string> order = base;
      std::set<std::string> s2 = seen;
      for (const auto& it : items)
        if (it.orig.positive) push_vars(it.orig.rhs, order, s2);
      push_vars(r.conclusion.rhs, order, s2);
      for (const auto& it : items) push_vars(it.orig.lhs, order, s2);
      Subst ren = renaming_for(order, base.size(), keep_source);
      Rule cand = sosw::apply(ren, r);
      std::string key;
      for (const auto& l : cand.premises) key += l.lhs.str() + l.label + (l.positive ? l.rhs.str() : "!") + ";";
      key += cand.conclusion.rhs.valid() ? cand.conclusion.rhs.str() : "";
      if (!best || key < best_key) {
        best = cand;
        best_s = std::move(ren);
        best_key = key;
      }
      return;
    }
    auto [a, b] = groups[g];
    std::sort(items.begin() + a, items.begin() + b,
              [](const Item& x, const Item& y) { return x.orig < y.orig; });
    do {
      rec(g + 1);
    } while (std::next_permutation(items.begin() + a, items.begin() + b,
                                   [](const Item& x, const Item& y) { return x.orig < y.orig; }) &&
             budget > 0);
  };
  rec(0);
  best->name = r.name;
  if (renaming) *renaming = std::move(best_s);
  return *best;
}

Rule rename_apart(const Rule& r, FreshNames& fresh) {
  Subst s;
  for (const auto& v : rule_vars(r)) s[v] = Term::var(fresh.next());
  return sosw::apply(s, r);
}

std::vector<std::string> free_variables(const Rule& r) {
  std::set<std::string> bound;
  collect_vars(r.source(), bound);
  for (const auto& l : r.premises)
    if (l.positive) collect_vars(l.rhs, bound);
  std::vector<std::string> out;
  for (const auto& v : rule_vars(r))
    if (!bound.count(v)) out.push_back(v);
  return out;
}

RuleClassification classify(const Rule& r) {
  RuleClassification c;
  c.standard = r.conclusion.positive;
  c.positive = true;
  for (const auto& l : r.premises)
    if (!l.positive) c.positive = false;

  std::set<std::string> src_vars;
  collect_vars(r.source(), src_vars);
  std::set<std::string> rhs_vars;
  bool ntytt = true;
  for (const auto& l : r.premises) {
    if (!l.positive) continue;
    if (!l.rhs.is_var() || src_vars.count(l.rhs.name()) || !rhs_vars.insert(l.rhs.name()).second) ntytt = false;
  }
  c.ntytt = ntytt;
  const Term& src = r.source();
  bool src_fx = !src.is_var() && [&] {
    std::set<std::string> seen;
    for (const auto& a : src.args())
      if (!a.is_var() || !seen.insert(a.name()).second) return false;
    return true;
  }();
  c.ntyxt = ntytt && src.is_var();
  c.ntyft = ntytt && src_fx;
  bool all_lhs_var = true, pos_lhs_var = true;
  for (const auto& l : r.premises) {
    if (!l.lhs.is_var()) {
      all_lhs_var = false;
      if (l.positive) pos_lhs_var = false;
    }
  }
  c.nxytt = ntytt && all_lhs_var;
  c.xyntt = ntytt && pos_lhs_var;
  c.xynft = c.ntyft && c.xyntt;

  // lookahead: a premise rhs variable used in some premise lhs
  std::set<std::string> prem_rhs;
  for (const auto& l : r.premises)
    if (l.positive) collect_vars(l.rhs, prem_rhs);
  for (const auto& l : r.premises) {
    std::set<std::string> lv;
    collect_vars(l.lhs, lv);
    for (const auto& v : lv)
      if (prem_rhs.count(v)) c.has_lookahead = true;
  }
  c.has_free_variables = !free_variables(r).empty();
  c.decent = !c.has_lookahead && !c.has_free_variables;
  return c;
}

std::vector<Literal> stable_negatives(const std::vector<Literal>& H) {
  std::set<Term> tau_blocked;
  for (const auto& l : H)
    if (!l.positive && l.label == kTau) tau_blocked.insert(l.lhs);
  std::vector<Literal> out;
  for (const auto& l : H)
    if (!l.positive && tau_blocked.count(l.lhs)) out.push_back(l);
  return out;
}

bool is_patience_rule(const Rule& r, const std::string& f, int i) {
  if (!r.conclusion.positive || r.conclusion.label != kTau || r.premises.size() != 1) return false;
  const Literal& p = r.premises[0];
  if (!p.positive || p.label != kTau || !p.lhs.is_var() || !p.rhs.is_var()) return false;
  const Term& src = r.source();
  if (src.is_var() || src.name() != f || i < 1 || static_cast<std::size_t>(i) > src.arity()) return false;
  std::set<std::string> seen;
  for (const auto& a : src.args())
    if (!a.is_var() || !seen.insert(a.name()).second) return false;
  if (seen.count(p.rhs.name())) return false;
  if (!(src.args()[i - 1] == p.lhs)) return false;
  std::vector<Term> args = src.args();
  args[i - 1] = p.rhs;
  return r.conclusion.rhs == Term::app(f, args);
}

Rule make_patience_rule(const Symbol& f, int i) {
  std::vector<Term> xs, ys;
  for (int k = 1; k <= f.arity; ++k) xs.push_back(Term::var("x" + std::to_string(k)));
  ys = xs;
  ys[i - 1] = Term::var("y");
  Rule r;
  r.name = "patience:" + f.name + "/" + std::to_string(i);
  r.premises.push_back(Literal::pos(xs[i - 1], kTau, Term::var("y")));
  r.conclusion = Literal::pos(Term::app(f.name, xs), kTau, Term::app(f.name, ys));
  return r;
}

ArgumentMarking MarkingSet::delta_for(const std::string& label) const {
  auto it = delta.find(label);
  if (it != delta.end()) return it->second;
  return ArgumentMarking{"delta:" + label, {}};
}

std::string equivalence_name(const EquivalenceKind& k) {
  std::string b;
  switch (k.base) {
    case EquivKind::Strong: b = "strong"; break;
    case EquivKind::Branching: b = "branching"; break;
    case EquivKind::Delay: b = "delay"; break;
    case EquivKind::Weak: b = "weak"; break;
  }
  return k.rooted ? "rooted-" + b : b;
}

std::optional<EquivalenceKind> parse_equivalence(const std::string& s) {
  EquivalenceKind k;
  std::string b = s;
  if (b.rfind("rooted-", 0) == 0) {
    k.rooted = true;
    b = b.substr(7);
  }
  if (b == "strong") k.base = EquivKind::Strong;
  else if (b == "branching") k.base = EquivKind::Branching;
  else if (b == "delay") k.base = EquivKind::Delay;
  else if (b == "weak") k.base = EquivKind::Weak;
  else return std::nullopt;
  return k;
}

std::vector<std::string> TSS::labels() const {
  std::vector<std::string> out = actions;
  out.push_back(kTau);
  return out;
}

bool TSS::has_label(const std::string& l) const {
  return l == kTau || std::find(actions.begin(), actions.end(), l) != actions.end();
}

const MarkingSet* TSS::find_markings(const std::string& n) const {
  if (n.empty()) return markings.empty() ? nullptr : &markings.front();
  for (const auto& m : markings)
    if (m.name == n) return &m;
  return nullptr;
}

void TSS::validate() const {
  auto lit = [&](const Rule& r, const Literal& l) {
    if (!has_label(l.label))
      throw Error(ErrorKind::UnknownAction, "rule '" + r.name + "' uses undeclared action '" + l.label + "'");
    sig.check(l.lhs);
    if (l.positive) sig.check(l.rhs);
  };
  for (const auto& r : rules) {
    for (const auto& l : r.premises) lit(r, l);
    lit(r, r.conclusion);
  }
  for (const auto& t : base) sig.check(t);
}

PatienceReport is_gamma_patient(const TSS& P, const ArgumentMarking& gamma) {
  PatienceReport rep;
  for (const auto& [f, i] : gamma.liquid) {
    bool found = false;
    for (const auto& r : P.rules)
      if (is_patience_rule(r, f, i)) {
        found = true;
        break;
      }
    if (!found) {
      rep.patient = false;
      rep.missing.push_back({f, i});
    }
  }
  return rep;
}

std::vector<FormatViolation> ready_simulation_violations(const TSS& P) {
  std::vector<FormatViolation> out;
  for (const auto& r : P.rules) {
    auto c = classify(r);
    if (!c.ntyft && !c.ntyxt) {
      std::string why = !c.ntytt ? "not ntytt: premise right-hand sides must be distinct fresh variables"
                                 : "source is neither a variable nor f(x1,...,xn) with distinct variables";
      out.push_back({r.name, why});
    }
    if (c.has_lookahead) out.push_back({r.name, "has lookahead"});
  }
  return out;
}

std::string print_literal(const Signature& sig, const Literal& l) {
  if (l.positive) return sig.print(l.lhs) + " -" + l.label + "-> " + sig.print(l.rhs);
  return sig.print(l.lhs) + " -" + l.label + "!->";
}

std::string print_rule(const Signature& sig, const Rule& r) {
  std::string s;
  for (std::size_t i = 0; i < r.premises.size(); ++i) {
    if (i) s += ", ";
    s += print_literal(sig, r.premises[i]);
  }
  if (!s.empty()) s += " ";
  return s + "|- " + print_literal(sig, r.conclusion);
}

}  // namespace sosw
