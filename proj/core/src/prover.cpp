#include "sosw/prover.hpp"

#include <functional>
#include <map>
#include <set>

#include "sosw/error.hpp"

namespace sosw {

std::vector<Literal> ProofTree::hypotheses() const {
  std::vector<Literal> out;
  std::function<void(const ProofTree&)> rec = [&](const ProofTree& p) {
    if (p.is_hypothesis()) out.push_back(p.conclusion);
    for (const auto& c : p.children) rec(c);
  };
  rec(*this);
  return out;
}

ProofTree apply(const Subst& s, const ProofTree& p) {
  ProofTree out{sosw::apply(s, p.conclusion), p.rule, {}};
  for (const auto& c : p.children) out.children.push_back(sosw::apply(s, c));
  return out;
}

std::string print_proof(const Signature& sig, const ProofTree& p, int indent) {
  std::string s(indent * 2, ' ');
  s += print_literal(sig, p.conclusion);
  s += p.is_hypothesis() ? "   [hypothesis]" : "   [" + p.rule + "]";
  s += "\n";
  for (const auto& c : p.children) s += print_proof(sig, c, indent + 1);
  return s;
}

namespace {
bool mentions_prefix(const Term& t, const std::string& prefix) {
  for (const auto& v : vars(t))
    if (v.rfind(prefix, 0) == 0) return true;
  return false;
}
}  // namespace

Prover::Prover(const std::vector<Rule>& rules, std::vector<Literal> hyps, bool linear)
    : rules_(rules), hyps_(std::move(hyps)), linear_(linear) {
  if (hyps_.size() > 64) throw Error(ErrorKind::CapExceeded, "more than 64 hypotheses");
}

std::vector<Prover::Result> Prover::apply_rule(const Rule& r0, const Term& s, int depth) {
  Rule r = rename_apart(r0, fresh_);
  Subst sigma;
  if (!match(r.source(), s, sigma)) return {};
  std::uint64_t posmask = 0;
  for (std::size_t i = 0; i < hyps_.size(); ++i)
    if (hyps_[i].positive) posmask |= std::uint64_t{1} << i;

  struct State {
    Subst sigma;
    std::uint64_t used = 0;
    std::vector<ProofTree> kids;
  };
  std::vector<State> states{{sigma, 0, {}}};
  for (const auto& p : r.premises) {
    std::vector<State> next;
    for (const auto& st : states) {
      Term w = sosw::apply(st.sigma, p.lhs);
      if (mentions_prefix(w, "_p")) continue;  // lookahead or free variable
      auto subs = p.positive ? prove_pos(w, p.label, depth - 1) : prove_neg(w, p.label, depth - 1);
      for (const auto& sub : subs) {
        if (linear_ && (st.used & sub.used & posmask)) continue;
        State n{st.sigma, st.used | sub.used, st.kids};
        if (p.positive && !match(sosw::apply(n.sigma, p.rhs), sub.target, n.sigma)) continue;
        n.kids.push_back(sub.proof);
        next.push_back(std::move(n));
        if (next.size() > budget_) {
          exhausted_ = true;
          break;
        }
      }
    }
    states = std::move(next);
    if (states.empty()) return {};
  }
  std::vector<Result> out;
  for (auto& st : states) {
    Result res;
    res.used = st.used;
    if (r.conclusion.positive) {
      res.target = sosw::apply(st.sigma, r.conclusion.rhs);
      if (mentions_prefix(res.target, "_p")) continue;
      res.proof.conclusion = Literal::pos(s, r.conclusion.label, res.target);
    } else {
      res.proof.conclusion = Literal::neg(s, r.conclusion.label);
    }
    res.proof.rule = r0.name;
    res.proof.children = std::move(st.kids);
    out.push_back(std::move(res));
  }
  return out;
}

std::vector<Prover::Result> Prover::prove_pos(const Term& s, const std::string& label, int depth) {
  std::vector<Result> out;
  for (std::size_t i = 0; i < hyps_.size(); ++i) {
    const Literal& h = hyps_[i];
    if (h.positive && h.label == label && h.lhs == s)
      out.push_back({h.rhs, std::uint64_t{1} << i, ProofTree{h, "", {}}});
  }
  for (const auto& r : rules_) {
    if (!r.conclusion.positive || r.conclusion.label != label) continue;
    Subst probe;
    if (!match(r.source(), s, probe)) continue;
    if (depth <= 0) {
      exhausted_ = true;
      continue;
    }
    for (auto& res : apply_rule(r, s, depth)) out.push_back(std::move(res));
  }
  return out;
}

std::vector<Prover::Result> Prover::prove_neg(const Term& s, const std::string& label, int depth) {
  std::vector<Result> out;
  for (std::size_t i = 0; i < hyps_.size(); ++i) {
    const Literal& h = hyps_[i];
    if (!h.positive && h.label == label && h.lhs == s)
      out.push_back({Term(), std::uint64_t{1} << i, ProofTree{h, "", {}}});
  }
  for (const auto& r : rules_) {
    if (r.conclusion.positive || r.conclusion.label != label) continue;
    Subst probe;
    if (!match(r.source(), s, probe)) continue;
    if (depth <= 0) {
      exhausted_ = true;
      continue;
    }
    for (auto& res : apply_rule(r, s, depth)) out.push_back(std::move(res));
  }
  return out;
}

std::optional<ProofTree> linearly_provable(const Rule& r, const std::vector<Rule>& rules, int depth,
                                           bool* exhausted) {
  Prover pr(rules, r.premises, true);
  const std::uint64_t all = r.premises.size() == 64 ? ~std::uint64_t{0}
                                                     : (std::uint64_t{1} << r.premises.size()) - 1;
  auto res = r.conclusion.positive ? pr.prove_pos(r.source(), r.conclusion.label, depth)
                                   : pr.prove_neg(r.source(), r.conclusion.label, depth);
  if (exhausted) *exhausted = pr.exhausted();
  for (auto& x : res)
    if (x.used == all && (!r.conclusion.positive || x.target == r.conclusion.rhs)) return x.proof;
  return std::nullopt;
}

namespace {

// Extends an injective variable renaming so that pattern maps onto t.
bool match_renaming(const Term& pattern, const Term& t, Subst& rho, std::set<std::string>& image) {
  if (pattern.is_var()) {
    if (!t.is_var()) return false;
    auto it = rho.find(pattern.name());
    if (it != rho.end()) return it->second == t;
    if (image.count(t.name())) return false;
    rho.emplace(pattern.name(), t);
    image.insert(t.name());
    return true;
  }
  if (t.is_var() || pattern.name() != t.name() || pattern.arity() != t.arity()) return false;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (!match_renaming(pattern.args()[i], t.args()[i], rho, image)) return false;
  return true;
}

}  // namespace

std::vector<RbarMatch> rbar_matches(const std::vector<Rule>& R, const Term& source, const std::string& label,
                                    const std::vector<Literal>& allowed) {
  std::vector<RbarMatch> out;
  for (const auto& r : R) {
    if (!r.conclusion.positive || r.conclusion.label != label) continue;
    Subst rho;
    std::set<std::string> image;
    if (!match_renaming(r.source(), source, rho, image)) continue;
    std::vector<Literal> chosen;
    std::vector<bool> taken(allowed.size(), false);
    std::function<void(std::size_t, Subst&, std::set<std::string>&)> rec = [&](std::size_t k, Subst& rh,
                                                                              std::set<std::string>& im) {
      if (k == r.premises.size()) {
        // Remaining target variables must be renamed too; decent rules have none.
        std::set<std::string> tv;
        collect_vars(r.conclusion.rhs, tv);
        for (const auto& v : tv)
          if (!rh.count(v)) return;
        out.push_back({&r, rh, sosw::apply(rh, r.conclusion.rhs), chosen});
        return;
      }
      const Literal& p = r.premises[k];
      for (std::size_t j = 0; j < allowed.size(); ++j) {
        const Literal& a = allowed[j];
        if (taken[j] || a.positive != p.positive || a.label != p.label) continue;
        Subst rh2 = rh;
        std::set<std::string> im2 = im;
        if (!match_renaming(p.lhs, a.lhs, rh2, im2)) continue;
        if (p.positive && !match_renaming(p.rhs, a.rhs, rh2, im2)) continue;
        taken[j] = true;
        chosen.push_back(a);
        rec(k + 1, rh2, im2);
        chosen.pop_back();
        taken[j] = false;
      }
    };
    rec(0, rho, image);
  }
  return out;
}

bool in_rbar(const std::vector<Rule>& R, const Rule& r) {
  if (!r.conclusion.positive) return false;
  for (const auto& m : rbar_matches(R, r.source(), r.conclusion.label, r.premises))
    if (m.premises.size() == r.premises.size() && m.target == r.conclusion.rhs) return true;
  return false;
}

bool is_gamma_patient_rule(const Rule& r, const ArgumentMarking& gamma) {
  if (!r.conclusion.positive || r.conclusion.label != kTau || r.premises.size() != 1) return false;
  const Literal& p = r.premises[0];
  if (!p.positive || p.label != kTau || !p.lhs.is_var() || !p.rhs.is_var()) return false;
  const Term& t = r.source();
  const std::string& x = p.lhs.name();
  if (count_occurrences(x, t) != 1 || occurs(p.rhs.name(), t)) return false;
  if (!occurrence_liquidity(t, x, gamma).front().liquid) return false;
  return r.conclusion.rhs == sosw::apply(Subst{{x, p.rhs}}, t);
}

}  // namespace sosw
