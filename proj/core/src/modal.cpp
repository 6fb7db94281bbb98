#include "sosw/modal.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "sosw/error.hpp"

namespace sosw {

Formula Formula::conj(std::vector<Formula> parts) {
  if (parts.empty()) {
    static const Formula t(std::make_shared<const Node>(Node{Kind::Conj, "", {}, "T"}));
    return t;
  }
  std::string t = "/\\[";
  for (std::size_t i = 0; i < parts.size(); ++i) t += (i ? ", " : "") + parts[i].str();
  t += "]";
  return Formula(std::make_shared<const Node>(Node{Kind::Conj, "", std::move(parts), std::move(t)}));
}

Formula Formula::neg(Formula f) {
  std::string t = "~" + f.str();
  return Formula(std::make_shared<const Node>(Node{Kind::Neg, "", {std::move(f)}, std::move(t)}));
}

Formula Formula::diamond(std::string label, Formula f) {
  std::string t = "<" + label + ">" + f.str();
  return Formula(std::make_shared<const Node>(Node{Kind::Diamond, std::move(label), {std::move(f)}, std::move(t)}));
}

Formula Formula::eps(Formula f) {
  std::string t = "<eps>" + f.str();
  return Formula(std::make_shared<const Node>(Node{Kind::Eps, "", {std::move(f)}, std::move(t)}));
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const auto& k : kids()) n += k.size();
  return n;
}

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(const std::string& s) : s_(s) {}

  Formula run() {
    Formula f = formula();
    skip();
    if (i_ != s_.size()) fail("unexpected text");
    return f;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }
  bool accept(const std::string& tok) {
    skip();
    if (s_.compare(i_, tok.size(), tok) != 0) return false;
    i_ += tok.size();
    return true;
  }
  void expect(const std::string& tok) {
    if (!accept(tok)) fail("expected '" + tok + "'");
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " in formula", 1, static_cast<int>(i_) + 1);
  }

  Formula formula() {
    if (accept("~")) return Formula::neg(formula());
    if (accept("(")) {
      Formula f = formula();
      expect(")");
      return f;
    }
    if (accept("/\\")) {
      expect("[");
      std::vector<Formula> parts;
      if (!accept("]")) {
        parts.push_back(formula());
        while (accept(",")) parts.push_back(formula());
        expect("]");
      }
      return Formula::conj(std::move(parts));
    }
    if (accept("<")) {
      skip();
      std::size_t j = i_;
      while (j < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\'')) ++j;
      if (j == i_) fail("expected label");
      std::string l = s_.substr(i_, j - i_);
      i_ = j;
      expect(">");
      Formula f = formula();
      return l == "eps" ? Formula::eps(std::move(f)) : Formula::diamond(l, std::move(f));
    }
    skip();
    if (i_ < s_.size() && s_[i_] == 'T' &&
        (i_ + 1 == s_.size() || !std::isalnum(static_cast<unsigned char>(s_[i_ + 1])))) {
      ++i_;
      return Formula::top();
    }
    fail("expected formula");
  }

  const std::string& s_;
  std::size_t i_ = 0;
};

}  // namespace

Formula parse_formula(const std::string& text) { return FormulaParser(text).run(); }

const char* class_name(FormulaClass c) {
  switch (c) {
    case FormulaClass::O: return "O";
    case FormulaClass::Od: return "Od";
    case FormulaClass::Ord: return "Ord";
    case FormulaClass::Ow: return "Ow";
    case FormulaClass::Orw: return "Orw";
  }
  return "?";
}

std::optional<FormulaClass> parse_class(const std::string& s) {
  for (auto c : {FormulaClass::O, FormulaClass::Od, FormulaClass::Ord, FormulaClass::Ow, FormulaClass::Orw})
    if (s == class_name(c)) return c;
  return std::nullopt;
}

FormulaClass class_for(const EquivalenceKind& k) {
  switch (k.base) {
    case EquivKind::Delay: return k.rooted ? FormulaClass::Ord : FormulaClass::Od;
    case EquivKind::Weak: return k.rooted ? FormulaClass::Orw : FormulaClass::Ow;
    default: return FormulaClass::O;
  }
}

namespace {

// Flattened conjunct list.
void conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (f.kind() == Formula::Kind::Conj)
    for (const auto& k : f.kids()) conjuncts(k, out);
  else
    out.push_back(f);
}

bool in_d(const Formula& f, bool weak);

bool all_parts(const Formula& f, bool (*pred)(const Formula&, bool), bool weak) {
  std::vector<Formula> parts;
  conjuncts(f, parts);
  return std::all_of(parts.begin(), parts.end(), [&](const Formula& g) { return pred(g, weak); });
}

// O_d (weak = false) and O_w (weak = true).
bool in_d(const Formula& f, bool weak) {
  switch (f.kind()) {
    case Formula::Kind::Conj: return all_parts(f, in_d, weak);
    case Formula::Kind::Neg: return in_d(f.sub(), weak);
    case Formula::Kind::Diamond: return false;
    case Formula::Kind::Eps: {
      const Formula& g = f.sub();
      if (g.kind() == Formula::Kind::Diamond && g.label() != kTau) {
        if (!weak && in_d(g.sub(), weak)) return true;
        if (weak && g.sub().kind() == Formula::Kind::Eps && in_d(g.sub().sub(), weak)) return true;
      }
      return in_d(g, weak);
    }
  }
  return false;
}

bool in_rooted(const Formula& f, bool weak) {
  if (in_d(f, weak)) return true;
  switch (f.kind()) {
    case Formula::Kind::Conj: return all_parts(f, in_rooted, weak);
    case Formula::Kind::Neg: return in_rooted(f.sub(), weak);
    case Formula::Kind::Diamond: return false;
    case Formula::Kind::Eps: {
      const Formula& g = f.sub();
      if (g.kind() != Formula::Kind::Diamond) return false;
      if (!weak) return in_d(g.sub(), false);
      return g.sub().kind() == Formula::Kind::Eps && in_d(g.sub().sub(), true);
    }
  }
  return false;
}

}  // namespace

bool in_class(const Formula& f, FormulaClass c) {
  switch (c) {
    case FormulaClass::O: return true;
    case FormulaClass::Od: return in_d(f, false);
    case FormulaClass::Ow: return in_d(f, true);
    case FormulaClass::Ord: return in_rooted(f, false);
    case FormulaClass::Orw: return in_rooted(f, true);
  }
  return false;
}

Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Conj: {
      std::vector<Formula> flat;
      for (const auto& k : f.kids()) conjuncts(normalize(k), flat);
      std::set<Formula> uniq;
      for (auto& g : flat)
        if (!g.is_top()) uniq.insert(g);
      if (uniq.size() == 1) return *uniq.begin();
      return Formula::conj(std::vector<Formula>(uniq.begin(), uniq.end()));
    }
    case Formula::Kind::Neg: {
      Formula g = normalize(f.sub());
      return g.kind() == Formula::Kind::Neg ? g.sub() : Formula::neg(g);
    }
    case Formula::Kind::Diamond: return Formula::diamond(f.label(), normalize(f.sub()));
    case Formula::Kind::Eps: {
      Formula g = normalize(f.sub());
      return g.kind() == Formula::Kind::Eps ? g : Formula::eps(g);
    }
  }
  return f;
}

ModelChecker::ModelChecker(const LTS& L) : L_(L), closure_(tau_closure(L)) {}

const std::vector<char>& ModelChecker::eval(const Formula& f) {
  auto it = memo_.find(f.id());
  if (it != memo_.end()) return *it->second.second;
  if (auto t = by_text_.find(f.str()); t != by_text_.end()) {
    memo_.emplace(f.id(), std::make_pair(f, &t->second));
    return t->second;
  }
  const std::size_t n = L_.size();
  std::vector<char> out(n, 0);
  switch (f.kind()) {
    case Formula::Kind::Conj: {
      std::fill(out.begin(), out.end(), 1);
      for (const auto& k : f.kids()) {
        const auto& v = eval(k);
        for (std::size_t s = 0; s < n; ++s) out[s] = out[s] && v[s];
      }
      break;
    }
    case Formula::Kind::Neg: {
      const auto& v = eval(f.sub());
      for (std::size_t s = 0; s < n; ++s) out[s] = !v[s];
      break;
    }
    case Formula::Kind::Diamond: {
      const auto& v = eval(f.sub());
      for (std::size_t s = 0; s < n; ++s)
        for (const auto& [l, t] : L_.out(static_cast<int>(s)))
          if (l == f.label() && v[t]) out[s] = 1;
      break;
    }
    case Formula::Kind::Eps: {
      const auto& v = eval(f.sub());
      for (std::size_t s = 0; s < n; ++s)
        for (int t : closure_[s])
          if (v[t]) out[s] = 1;
      break;
    }
  }
  const auto& stored = by_text_.emplace(f.str(), std::move(out)).first->second;
  memo_.emplace(f.id(), std::make_pair(f, &stored));
  return stored;
}

bool satisfies(const LTS& L, int state, const Formula& f) { return ModelChecker(L).satisfies(state, f); }

namespace {

Formula conj_of(std::vector<Formula> parts) {
  std::sort(parts.begin(), parts.end());
  parts.erase(std::unique(parts.begin(), parts.end()), parts.end());
  if (parts.size() == 1) return parts[0];
  return Formula::conj(std::move(parts));
}

// Builds distinguishing formulas from the deletion rounds of the
// pair-deletion fixpoint: a pair deleted in round k is separated by a move
// whose answers all lead to pairs deleted before round k.
class Distinguisher {
 public:
  Distinguisher(const LTS& L, EquivKind kind) : S_(L), kind_(kind), A_(bisimulation_approximants(S_, kind)) {}

  const Saturation& sat() const { return S_; }
  bool related(int p, int q) const { return A_.related(p, q); }

  // Requires !related(p, q). The result holds in p and fails in q.
  Formula unrooted(int p, int q) {
    auto key = std::make_pair(p, q);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const int k = A_.level[p][q];
    if (k <= 0) throw Error(ErrorKind::Precondition, "states are equivalent");
    if (k > static_cast<int>(S_.lts.size() * S_.lts.size()))
      throw Error(ErrorKind::BoundExceeded, "distinguishing formula depth exceeds the state-pair bound");
    std::optional<Formula> f = attempt(p, q, k);
    if (!f) {
      auto g = attempt(q, p, k);
      if (!g) throw Error(ErrorKind::BoundExceeded, "no separating move found for a deleted pair");
      f = Formula::neg(*g);
    }
    memo_.emplace(key, *f);
    return *f;
  }

 private:
  bool before(int a, int b, int k) const {
    int l = A_.level[a][b];
    return l < 0 || l >= k;  // related in round k-1
  }

  const std::vector<std::vector<std::vector<int>>>& answers() const {
    switch (kind_) {
      case EquivKind::Delay: return S_.delay;
      case EquivKind::Weak: return S_.weak;
      default: return S_.strong;
    }
  }

  // A formula true in p and false in q from a move of p that q cannot
  // answer up to round k-1.
  std::optional<Formula> attempt(int p, int q, int k) {
    const int tau = S_.label_index(kTau);
    const auto& ans = answers();
    for (std::size_t l = 0; l < S_.labels.size(); ++l) {
      const bool is_tau = static_cast<int>(l) == tau;
      for (int p2 : S_.strong[p][l]) {
        if (kind_ != EquivKind::Strong && is_tau && before(p2, q, k)) continue;
        bool answered = false;
        for (int q2 : ans[q][l]) answered = answered || before(p2, q2, k);
        if (answered) continue;
        std::vector<Formula> parts;
        for (int q2 : ans[q][l]) parts.push_back(unrooted(p2, q2));
        const std::string& a = S_.labels[l];
        if (kind_ == EquivKind::Strong) return Formula::diamond(a, conj_of(parts));
        if (is_tau) {
          parts.push_back(unrooted(p2, q));
          return Formula::eps(conj_of(parts));
        }
        Formula body = conj_of(parts);
        if (kind_ == EquivKind::Weak) body = Formula::eps(body);
        return Formula::eps(Formula::diamond(a, body));
      }
    }
    return std::nullopt;
  }

  Saturation S_;
  EquivKind kind_;
  Approximants A_;
  std::map<std::pair<int, int>, Formula> memo_;
};

std::optional<Formula> rooted_attempt(Distinguisher& D, int p, int q, EquivKind kind) {
  const Saturation& S = D.sat();
  const auto& ans = kind == EquivKind::Delay ? S.delay : S.weak;
  for (std::size_t l = 0; l < S.labels.size(); ++l)
    for (int p2 : S.strong[p][l]) {
      bool answered = false;
      for (int q2 : ans[q][l]) answered = answered || D.related(p2, q2);
      if (answered) continue;
      std::vector<Formula> parts;
      for (int q2 : ans[q][l]) parts.push_back(D.unrooted(p2, q2));
      Formula body = conj_of(parts);
      if (kind == EquivKind::Weak) body = Formula::eps(body);
      return Formula::eps(Formula::diamond(S.labels[l], body));
    }
  return std::nullopt;
}

}  // namespace

std::optional<Formula> distinguishing_formula(const LTS& L, int p, int q, FormulaClass c) {
  EquivKind kind = EquivKind::Strong;
  if (c == FormulaClass::Od || c == FormulaClass::Ord) kind = EquivKind::Delay;
  if (c == FormulaClass::Ow || c == FormulaClass::Orw) kind = EquivKind::Weak;
  Distinguisher D(L, kind);
  if (c == FormulaClass::Ord || c == FormulaClass::Orw) {
    if (auto f = rooted_attempt(D, p, q, kind)) return f;
    if (auto g = rooted_attempt(D, q, p, kind)) return Formula::neg(*g);
    return std::nullopt;
  }
  if (D.related(p, q)) return std::nullopt;
  return D.unrooted(p, q);
}

}  // namespace sosw
