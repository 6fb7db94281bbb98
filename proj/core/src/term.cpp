#include "sosw/term.hpp"

#include <algorithm>
#include <functional>

#include "sosw/error.hpp"

namespace sosw {

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::Arity: return "ArityError";
    case ErrorKind::UnknownAction: return "UnknownAction";
    case ErrorKind::DuplicateMarking: return "DuplicateMarking";
    case ErrorKind::UniverseEscape: return "UniverseEscape";
    case ErrorKind::IncompleteTSS: return "IncompleteTSS";
    case ErrorKind::BoundExceeded: return "BoundExceeded";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::PartialRuloids: return "PartialRuloids";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::SubsetBlowup: return "SubsetBlowup";
    case ErrorKind::InfiniteDecomposition: return "InfiniteDecomposition";
    case ErrorKind::Unsupported: return "Unsupported";
    case ErrorKind::Precondition: return "PreconditionViolated";
  }
  return "Error";
}

struct Term::Node {
  bool var = false;
  std::string name;
  std::vector<Term> args;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t depth = 0;
};

namespace {
std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}
const std::vector<Term>& no_args() {
  static const std::vector<Term> empty;
  return empty;
}
}  // namespace

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->var = true;
  n->hash = mix(std::hash<std::string>{}(name), 1);
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::app(std::string symbol, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  std::size_t h = mix(std::hash<std::string>{}(symbol), 2);
  for (const auto& a : args) {
    h = mix(h, a.hash());
    n->size += a.size();
    n->depth = std::max(n->depth, a.depth() + 1);
  }
  n->hash = h;
  n->name = std::move(symbol);
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::is_var() const { return node_ && node_->var; }
const std::string& Term::name() const { return node_->name; }
const std::vector<Term>& Term::args() const { return node_ ? node_->args : no_args(); }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }
std::size_t Term::size() const { return node_ ? node_->size : 0; }
std::size_t Term::depth() const { return node_ ? node_->depth : 0; }

std::string Term::str() const {
  if (!node_) return "<null>";
  if (node_->var || node_->args.empty()) return node_->name;
  std::string s = node_->name + "(";
  for (std::size_t i = 0; i < node_->args.size(); ++i) {
    if (i) s += ",";
    s += node_->args[i].str();
  }
  return s + ")";
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.node_->hash != b.node_->hash || a.node_->var != b.node_->var ||
      a.node_->name != b.node_->name || a.node_->args.size() != b.node_->args.size())
    return false;
  for (std::size_t i = 0; i < a.node_->args.size(); ++i)
    if (!(a.node_->args[i] == b.node_->args[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  // variables sort before applications
  if (a.node_->var != b.node_->var)
    return a.node_->var ? std::strong_ordering::less : std::strong_ordering::greater;
  if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
  const auto& x = a.node_->args;
  const auto& y = b.node_->args;
  if (auto c = x.size() <=> y.size(); c != 0) return c;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (auto c = x[i] <=> y[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------- Signature

void Signature::add(const Symbol& s) {
  auto it = symbols_.find(s.name);
  if (it != symbols_.end() && it->second.arity != s.arity)
    throw Error(ErrorKind::Arity, "symbol '" + s.name + "' redeclared with arity " +
                                      std::to_string(s.arity) + " (was " +
                                      std::to_string(it->second.arity) + ")");
  symbols_[s.name] = s;
}

const Symbol* Signature::find(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

const Symbol* Signature::find_infix(const std::string& op) const {
  for (const auto& [n, s] : symbols_)
    if (s.infix == op) return &s;
  return nullptr;
}

std::vector<Symbol> Signature::constants() const {
  std::vector<Symbol> out;
  for (const auto& [n, s] : symbols_)
    if (s.arity == 0) out.push_back(s);
  return out;
}

std::vector<Symbol> Signature::functions() const {
  std::vector<Symbol> out;
  for (const auto& [n, s] : symbols_)
    if (s.arity > 0) out.push_back(s);
  return out;
}

void Signature::check(const Term& t) const {
  if (t.is_var()) return;
  const Symbol* s = find(t.name());
  if (!s) throw Error(ErrorKind::Arity, "undeclared symbol '" + t.name() + "'");
  if (static_cast<std::size_t>(s->arity) != t.arity())
    throw Error(ErrorKind::Arity, "symbol '" + t.name() + "' expects " + std::to_string(s->arity) +
                                      " argument(s), got " + std::to_string(t.arity()));
  for (const auto& a : t.args()) check(a);
}

std::string Signature::print(const Term& t) const {
  if (t.is_var() || t.arity() == 0) return t.name();
  const Symbol* s = find(t.name());
  if (s && !s->infix.empty() && t.arity() == 2) {
    auto side = [&](const Term& c, bool right) {
      std::string inner = print(c);
      const Symbol* cs = c.is_var() ? nullptr : find(c.name());
      if (cs && !cs->infix.empty() && c.arity() == 2 &&
          (cs->precedence < s->precedence || (right && cs->precedence == s->precedence)))
        return "(" + inner + ")";
      return inner;
    };
    return side(t.args()[0], false) + s->infix + side(t.args()[1], true);
  }
  std::string out = t.name() + "(";
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) out += ",";
    out += print(t.args()[i]);
  }
  return out + ")";
}

// ------------------------------------------------------------ substitutions

Term apply(const Subst& s, const Term& t) {
  if (s.empty()) return t;
  if (t.is_var()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(sosw::apply(s, a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::app(t.name(), std::move(args)) : t;
}

Subst compose(const Subst& s, const Subst& r) {
  Subst out;
  for (const auto& [x, t] : r) out[x] = sosw::apply(s, t);
  for (const auto& [x, t] : s)
    if (!out.count(x)) out[x] = t;
  return out;
}

bool match(const Term& pattern, const Term& t, Subst& s) {
  if (pattern.is_var()) {
    auto it = s.find(pattern.name());
    if (it != s.end()) return it->second == t;
    s.emplace(pattern.name(), t);
    return true;
  }
  if (t.is_var() || pattern.name() != t.name() || pattern.arity() != t.arity()) return false;
  for (std::size_t i = 0; i < t.arity(); ++i)
    if (!match(pattern.args()[i], t.args()[i], s)) return false;
  return true;
}

namespace {
void vars_rec(const Term& t, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (t.is_var()) {
    if (seen.insert(t.name()).second) out.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) vars_rec(a, out, seen);
}
}  // namespace

std::vector<std::string> vars(const Term& t) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  vars_rec(t, out, seen);
  return out;
}

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, out);
}

bool occurs(const std::string& x, const Term& t) { return count_occurrences(x, t) > 0; }

std::size_t count_occurrences(const std::string& x, const Term& t) {
  if (t.is_var()) return t.name() == x ? 1 : 0;
  std::size_t n = 0;
  for (const auto& a : t.args()) n += count_occurrences(x, a);
  return n;
}

bool is_closed(const Term& t) {
  if (t.is_var()) return false;
  for (const auto& a : t.args())
    if (!is_closed(a)) return false;
  return true;
}

bool is_univariate(const Term& t) {
  std::vector<std::string> all;
  std::function<void(const Term&)> rec = [&](const Term& u) {
    if (u.is_var()) all.push_back(u.name());
    for (const auto& a : u.args()) rec(a);
  };
  rec(t);
  std::sort(all.begin(), all.end());
  return std::adjacent_find(all.begin(), all.end()) == all.end();
}

// ----------------------------------------------------------------- markings

ArgumentMarking ArgumentMarking::intersect(const ArgumentMarking& o, std::string new_name) const {
  ArgumentMarking out;
  out.name = new_name.empty() ? name + "&" + o.name : std::move(new_name);
  for (const auto& p : liquid)
    if (o.liquid.count(p)) out.liquid.insert(p);
  return out;
}

bool ArgumentMarking::subset_of(const ArgumentMarking& o) const {
  return std::includes(o.liquid.begin(), o.liquid.end(), liquid.begin(), liquid.end());
}

ArgumentMarking ArgumentMarking::universal(const Signature& sig, std::string name) {
  ArgumentMarking m;
  m.name = std::move(name);
  for (const auto& s : sig.functions())
    for (int i = 1; i <= s.arity; ++i) m.liquid.insert({s.name, i});
  return m;
}

std::string ArgumentMarking::str() const {
  std::string s;
  for (const auto& [f, i] : liquid) {
    if (!s.empty()) s += " ";
    s += f + "/" + std::to_string(i);
  }
  return s;
}

namespace {
void frames_rec(const Term& t, const std::string& x, std::vector<std::pair<std::string, int>>& cur,
                std::vector<std::vector<std::pair<std::string, int>>>& out) {
  if (t.is_var()) {
    if (t.name() == x) out.push_back(cur);
    return;
  }
  for (std::size_t i = 0; i < t.arity(); ++i) {
    cur.emplace_back(t.name(), static_cast<int>(i + 1));
    frames_rec(t.args()[i], x, cur, out);
    cur.pop_back();
  }
}
}  // namespace

std::vector<std::vector<std::pair<std::string, int>>> occurrence_frames(const Term& t,
                                                                        const std::string& x) {
  std::vector<std::vector<std::pair<std::string, int>>> out;
  std::vector<std::pair<std::string, int>> cur;
  frames_rec(t, x, cur, out);
  return out;
}

std::vector<Occurrence> occurrence_liquidity(const Term& t, const std::string& x,
                                             const ArgumentMarking& m) {
  std::vector<Occurrence> out;
  for (const auto& frames : occurrence_frames(t, x)) {
    Occurrence o;
    o.liquid = true;
    for (const auto& [f, i] : frames) {
      o.path.push_back(i);
      if (!m.holds(f, i)) o.liquid = false;
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::string> fresh_variables(const std::set<std::string>& avoid, std::size_t count,
                                         const std::string& prefix) {
  std::vector<std::string> out;
  for (std::size_t k = 0; out.size() < count; ++k) {
    std::string n = prefix + std::to_string(k);
    if (!avoid.count(n)) out.push_back(n);
  }
  return out;
}

std::vector<Term> enumerate_terms(const Signature& sig, int depth, const std::vector<Term>& leaves,
                                  bool include_constants) {
  std::vector<Term> level;  // all terms of depth <= current
  std::set<Term> seen;
  auto add = [&](const Term& t) {
    if (seen.insert(t).second) level.push_back(t);
  };
  if (include_constants)
    for (const auto& c : sig.constants()) add(Term::app(c.name));
  for (const auto& l : leaves) add(l);
  for (int d = 1; d <= depth; ++d) {
    const std::vector<Term> prev = level;
    for (const auto& f : sig.functions()) {
      std::vector<std::size_t> idx(f.arity, 0);
      while (true) {
        std::vector<Term> args;
        bool fresh_depth = false;
        for (int i = 0; i < f.arity; ++i) {
          args.push_back(prev[idx[i]]);
          if (static_cast<int>(prev[idx[i]].depth()) == d - 1) fresh_depth = true;
        }
        if (fresh_depth) add(Term::app(f.name, args));
        int k = 0;
        while (k < f.arity && ++idx[k] == prev.size()) idx[k++] = 0;
        if (k == f.arity) break;
      }
    }
  }
  return level;
}

}  // namespace sosw
