#include "sosw/ruloid.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "sosw/error.hpp"

namespace sosw {

Rule canonical_ruloid(const Rule& r) { return alpha_normal(r, true); }


TSS to_decent_ntyft(const TSS& P, const std::vector<Term>& free_universe) {
  TSS out = P;
  out.rules.clear();
  for (const auto& r : P.rules) {
    if (!r.standard()) continue;
    auto c = classify(r);
    if (!c.ntyft && !c.ntyxt)
      throw Error(ErrorKind::Precondition, "rule '" + r.name + "' is neither ntyft nor ntyxt");
    if (c.has_lookahead) throw Error(ErrorKind::Precondition, "rule '" + r.name + "' has lookahead");

    std::vector<Rule> expanded;
    if (c.ntyxt) {
      const std::string x = r.source().name();
      auto used = rule_vars(r);
      for (const auto& [n, f] : P.sig.symbols()) {
        auto xs = fresh_variables(used, f.arity, "x");
        std::vector<Term> args;
        for (const auto& v : xs) args.push_back(Term::var(v));
        Rule e = sosw::apply(Subst{{x, Term::app(f.name, args)}}, r);
        e.name = r.name + "@" + f.name;
        expanded.push_back(std::move(e));
      }
    } else {
      expanded.push_back(r);
    }
    for (auto& e : expanded) {
      auto fv = free_variables(e);
      if (fv.empty()) {
        out.rules.push_back(std::move(e));
        continue;
      }
      if (free_universe.empty())
        throw Error(ErrorKind::Unbounded, "rule '" + r.name + "' has free variables and no universe is configured");
      std::vector<std::size_t> idx(fv.size(), 0);
      while (true) {
        Subst s;
        std::string suffix;
        for (std::size_t k = 0; k < fv.size(); ++k) {
          s[fv[k]] = free_universe[idx[k]];
          suffix += (k ? "," : "") + fv[k] + "=" + P.sig.print(free_universe[idx[k]]);
        }
        Rule inst = sosw::apply(s, e);
        inst.name = e.name + "{" + suffix + "}";
        out.rules.push_back(std::move(inst));
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == free_universe.size()) idx[k++] = 0;
        if (k == idx.size()) break;
      }
    }
  }
  return out;
}

TSS to_xynft(const TSS& Pd, int rounds) {
  FreshNames fresh("_d");
  std::vector<Rule> cur = Pd.rules;
  for (int round = 0;; ++round) {
    bool pending = false;
    std::vector<Rule> next;
    for (const auto& r : cur) {
      auto it = std::find_if(r.premises.begin(), r.premises.end(),
                             [](const Literal& l) { return l.positive && !l.lhs.is_var(); });
      if (it == r.premises.end()) {
        next.push_back(r);
        continue;
      }
      if (round >= rounds)
        throw Error(ErrorKind::BoundExceeded,
                    "premise resolution did not reach xynft form within " + std::to_string(rounds) + " rounds");
      pending = true;
      const Literal p = *it;
      for (const auto& r2 : Pd.rules) {
        if (!r2.standard() || r2.conclusion.label != p.label) continue;
        Rule rr = rename_apart(r2, fresh);
        Subst sigma;
        if (!match(rr.source(), p.lhs, sigma)) continue;
        Rule n;
        n.name = r.name + "/" + r2.name;
        for (const auto& l : r.premises)
          if (!(l == p)) n.premises.push_back(l);
        for (const auto& l : rr.premises) n.premises.push_back(sosw::apply(sigma, l));
        n.conclusion = r.conclusion;
        n = sosw::apply(Subst{{p.rhs.name(), sosw::apply(sigma, rr.conclusion.rhs)}}, n);
        n.name = r.name + "/" + r2.name;
        next.push_back(std::move(n));
      }
    }
    cur = std::move(next);
    if (!pending) break;
  }
  TSS out = Pd;
  out.rules = std::move(cur);
  return out;
}

TSS augment_nonstandard(const TSS& Pdd, std::size_t cap) {
  TSS out = Pdd;
  for (const auto& [fname, f] : Pdd.sig.symbols()) {
    std::vector<Term> xs;
    for (int i = 1; i <= f.arity; ++i) xs.push_back(Term::var("x" + std::to_string(i)));
    const Term src = Term::app(f.name, xs);
    for (const auto& label : Pdd.labels()) {
      // Denials offered by each f/label rule, keyed without rhs variables.
      std::vector<std::vector<Literal>> options;
      bool has_axiom = false;
      for (const auto& r : Pdd.rules) {
        if (!r.standard() || r.conclusion.label != label || r.source().is_var() || r.source().name() != f.name)
          continue;
        Subst s;
        for (int i = 0; i < f.arity; ++i) s[r.source().args()[i].name()] = xs[i];
        std::vector<Literal> opts;
        for (const auto& l : r.premises) {
          Term w = sosw::apply(s, l.lhs);
          opts.push_back(l.positive ? Literal::neg(w, l.label) : Literal::pos(w, l.label, Term::var("_z")));
        }
        std::sort(opts.begin(), opts.end());
        opts.erase(std::unique(opts.begin(), opts.end()), opts.end());
        if (opts.empty()) has_axiom = true;
        options.push_back(std::move(opts));
      }
      if (has_axiom) continue;
      double product = 1;
      for (const auto& o : options) product *= static_cast<double>(o.size());
      if (product > static_cast<double>(cap))
        throw Error(ErrorKind::CapExceeded, "non-standard rules for " + f.name + "/" + label + " need " +
                                                std::to_string(static_cast<long long>(product)) + " selections");
      std::set<std::vector<Literal>> sets;
      std::vector<Literal> cur;
      std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == options.size()) {
          std::vector<Literal> h = cur;
          std::sort(h.begin(), h.end());
          h.erase(std::unique(h.begin(), h.end()), h.end());
          for (std::size_t i = 0; i + 1 < h.size(); ++i)
            for (std::size_t j = i + 1; j < h.size(); ++j)
              if (denies(h[i], h[j])) return;  // contradictory, never applicable
          sets.insert(std::move(h));
          return;
        }
        for (const auto& l : options[k]) {
          cur.push_back(l);
          rec(k + 1);
          cur.pop_back();
        }
      };
      rec(0);
      // Drop premise sets that strictly contain another one.
      std::vector<std::vector<Literal>> kept;
      for (const auto& h : sets) {
        bool subsumed = false;
        for (const auto& g : sets)
          if (g.size() < h.size() && std::includes(h.begin(), h.end(), g.begin(), g.end())) {
            subsumed = true;
            break;
          }
        if (!subsumed) kept.push_back(h);
      }
      int n = 0;
      for (const auto& h : kept) {
        Rule r;
        r.name = "neg:" + f.name + ":" + label + "#" + std::to_string(++n);
        int z = 0;
        for (auto l : h) {
          if (l.positive) l.rhs = Term::var("z" + std::to_string(++z));
          r.premises.push_back(l);
        }
        r.conclusion = Literal::neg(src, label);
        r.normalize();
        out.rules.push_back(std::move(r));
      }
    }
  }
  return out;
}

RuloidEngine::RuloidEngine(const TSS& P, RuloidOptions opts) : P_(P), opts_(std::move(opts)) {
  dagger_ = to_decent_ntyft(P_, opts_.free_universe);
  ddagger_ = to_xynft(dagger_, opts_.resolve_rounds);
  plus_ = augment_nonstandard(ddagger_, opts_.product_cap);
}

RuloidEngine::Partial RuloidEngine::freshen(const Partial& p) {
  std::set<std::string> keep;
  std::set<std::string> all;
  collect_vars(p.proof.conclusion.lhs, keep);
  for (const auto& l : p.premises) {
    collect_vars(l.lhs, all);
    if (l.positive) collect_vars(l.rhs, all);
  }
  if (p.target.valid()) collect_vars(p.target, all);
  Subst s;
  for (const auto& v : all)
    if (!keep.count(v)) s[v] = Term::var(fresh_.next());
  if (s.empty()) return p;
  Partial out;
  for (const auto& l : p.premises) out.premises.push_back(sosw::apply(s, l));
  if (p.target.valid()) out.target = sosw::apply(s, p.target);
  out.proof = sosw::apply(s, p.proof);
  return out;
}

const RuloidEngine::Cached& RuloidEngine::base(const Term& t, const std::string& label, bool positive, int depth) {
  auto key = std::make_tuple(t, label, positive);
  auto it = memo_.find(key);
  if (it != memo_.end() && !it->second.partial) return it->second;
  Cached c = compute(t, label, positive, depth);
  if (it != memo_.end()) {
    if (c.partial && c.items.size() <= it->second.items.size()) return it->second;
    it->second = std::move(c);
    return it->second;
  }
  return memo_.emplace(key, std::move(c)).first->second;
}

RuloidEngine::Cached RuloidEngine::compute(const Term& t, const std::string& label, bool positive, int depth) {
  Cached out;
  if (t.is_var()) {
    Partial p;
    if (positive) {
      Term y = Term::var(fresh_.next());
      Literal l = Literal::pos(t, label, y);
      p.premises = {l};
      p.target = y;
      p.proof = ProofTree{l, "", {}};
    } else {
      Literal l = Literal::neg(t, label);
      p.premises = {l};
      p.proof = ProofTree{l, "", {}};
    }
    out.items.push_back(std::move(p));
    return out;
  }
  if (depth <= 0) {
    out.partial = true;
    return out;
  }
  std::set<std::string> seen;
  for (const auto& r : plus_.rules) {
    if (r.conclusion.positive != positive || r.conclusion.label != label || r.source().is_var() ||
        r.source().name() != t.name())
      continue;
    Rule rr = rename_apart(r, fresh_);
    Subst sigma0;
    if (!match(rr.source(), t, sigma0)) continue;
    struct State {
      Subst sigma;
      std::vector<Literal> premises;
      std::vector<ProofTree> kids;
    };
    std::vector<State> states{{sigma0, {}, {}}};
    for (const auto& p : rr.premises) {
      Term w = sosw::apply(sigma0, p.lhs);
      const Cached& sub = base(w, p.label, p.positive, depth - 1);
      if (sub.partial) out.partial = true;
      std::vector<State> next;
      for (const auto& st : states) {
        for (const auto& item : sub.items) {
          Partial fi = freshen(item);
          State n = st;
          if (p.positive) n.sigma[p.rhs.name()] = fi.target;
          n.premises.insert(n.premises.end(), fi.premises.begin(), fi.premises.end());
          n.kids.push_back(std::move(fi.proof));
          next.push_back(std::move(n));
        }
        if (next.size() > opts_.product_cap)
          throw Error(ErrorKind::CapExceeded, "ruloid product for " + P_.sig.print(t) + " exceeds the cap");
      }
      states = std::move(next);
      if (states.empty()) break;
    }
    for (auto& st : states) {
      Partial res;
      std::sort(st.premises.begin(), st.premises.end());
      st.premises.erase(std::unique(st.premises.begin(), st.premises.end()), st.premises.end());
      bool contradictory = false;
      for (std::size_t i = 0; i + 1 < st.premises.size() && !contradictory; ++i)
        for (std::size_t j = i + 1; j < st.premises.size(); ++j)
          if (denies(st.premises[i], st.premises[j])) {
            contradictory = true;
            break;
          }
      if (contradictory) continue;
      res.premises = std::move(st.premises);
      if (positive) {
        res.target = sosw::apply(st.sigma, rr.conclusion.rhs);
        res.proof.conclusion = Literal::pos(t, label, res.target);
      } else {
        res.proof.conclusion = Literal::neg(t, label);
      }
      res.proof.rule = r.name;
      res.proof.children = std::move(st.kids);
      // Deduplicate up to renaming of the rhs variables.
      Rule key_rule{"", res.premises, res.proof.conclusion};
      Rule canon = canonical_ruloid(key_rule);
      std::string key = print_rule(P_.sig, canon);
      if (!seen.insert(key).second) continue;
      out.items.push_back(std::move(res));
    }
  }
  return out;
}

RuloidSet RuloidEngine::finish(const Term& /*source*/, const Cached& c, bool positive, bool merges) {
  RuloidSet out;
  out.partial = c.partial;
  std::set<std::string> keys;
  std::vector<std::pair<Rule, ProofTree>> bases;
  for (const auto& item : c.items) {
    Rule r{"ruloid", item.premises, item.proof.conclusion};
    r.normalize();
    Subst rho;
    Rule canon = alpha_normal(r, true, &rho);
    std::string key = print_rule(P_.sig, canon);
    if (!keys.insert(key).second) continue;
    ProofTree proof = sosw::apply(rho, item.proof);
    out.ruloids.push_back({canon, true, proof});
    bases.push_back({canon, proof});
  }
  if (!positive || !merges) return out;

  // Non-linear ruloids: identify rhs variables of positive premises that
  // share lhs and label.
  for (const auto& [r, proof] : bases) {
    std::vector<std::vector<std::string>> groups;
    std::map<std::pair<Term, std::string>, std::vector<std::string>> by;
    for (const auto& l : r.premises)
      if (l.positive) by[{l.lhs, l.label}].push_back(l.rhs.name());
    for (auto& [k, v] : by)
      if (v.size() >= 2) groups.push_back(v);
    if (groups.empty()) continue;
    // Enumerate set partitions of each group (restricted growth strings).
    std::vector<std::vector<std::vector<int>>> parts(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
      std::size_t n = groups[g].size();
      std::vector<int> a(n, 0);
      std::function<void(std::size_t, int)> rec = [&](std::size_t i, int mx) {
        if (i == n) {
          parts[g].push_back(a);
          return;
        }
        for (int b = 0; b <= mx + 1; ++b) {
          a[i] = b;
          rec(i + 1, std::max(mx, b));
        }
      };
      a[0] = 0;
      rec(1, 0);
    }
    std::vector<std::size_t> idx(groups.size(), 0);
    while (true) {
      Subst s;
      bool trivial = true;
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& pa = parts[g][idx[g]];
        std::map<int, std::string> rep;
        for (std::size_t i = 0; i < pa.size(); ++i) {
          auto [it, fresh] = rep.emplace(pa[i], groups[g][i]);
          if (!fresh) {
            s[groups[g][i]] = Term::var(it->second);
            trivial = false;
          }
        }
      }
      if (!trivial) {
        Rule m = canonical_ruloid(sosw::apply(s, r));
        m.name = "ruloid";
        std::string key = print_rule(P_.sig, m);
        if (keys.insert(key).second) out.ruloids.push_back({m, false, sosw::apply(s, proof)});
      }
      std::size_t g = 0;
      while (g < idx.size() && ++idx[g] == parts[g].size()) idx[g++] = 0;
      if (g == idx.size()) break;
    }
  }
  return out;
}

RuloidSet RuloidEngine::ruloids(const Term& source, const std::string& label) {
  return finish(source, base(source, label, true, opts_.depth_bound), true, true);
}

RuloidSet RuloidEngine::linear_ruloids(const Term& source, const std::string& label) {
  return finish(source, base(source, label, true, opts_.depth_bound), true, false);
}

RuloidSet RuloidEngine::negative_ruloids(const Term& source, const std::string& label) {
  return finish(source, base(source, label, false, opts_.depth_bound), false, false);
}

}  // namespace sosw
