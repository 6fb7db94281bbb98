#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sosw {

// Immutable first-order term: a variable or a constructor application.
// Copies share structure.
class Term {
 public:
  Term() = default;
  static Term var(std::string name);
  static Term app(std::string symbol, std::vector<Term> args = {});

  bool valid() const { return static_cast<bool>(node_); }
  bool is_var() const;
  const std::string& name() const;
  const std::vector<Term>& args() const;
  std::size_t arity() const { return args().size(); }
  std::size_t hash() const;
  std::size_t size() const;   // number of nodes
  std::size_t depth() const;  // variables and constants have depth 0

  // Prefix rendering, e.g. plus(x,seq(a,y)). Use Signature::print for infix.
  std::string str() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

struct Symbol {
  std::string name;
  int arity = 0;
  std::string infix;  // empty unless written as a binary infix operator
  int precedence = 0;
};

class Signature {
 public:
  void add(const Symbol& s);
  bool has(const std::string& name) const { return symbols_.count(name) != 0; }
  const Symbol* find(const std::string& name) const;
  const Symbol* find_infix(const std::string& op) const;
  const std::map<std::string, Symbol>& symbols() const { return symbols_; }
  std::vector<Symbol> constants() const;
  std::vector<Symbol> functions() const;  // arity > 0

  // Throws Error(Arity) when t uses an undeclared symbol or a wrong argument count.
  void check(const Term& t) const;
  std::string print(const Term& t) const;

  friend bool operator==(const Signature& a, const Signature& b) { return a.symbols_ == b.symbols_; }

 private:
  std::map<std::string, Symbol> symbols_;
};

inline bool operator==(const Symbol& a, const Symbol& b) {
  return a.name == b.name && a.arity == b.arity && a.infix == b.infix && a.precedence == b.precedence;
}

using Subst = std::map<std::string, Term>;

Term apply(const Subst& s, const Term& t);
// Composition: apply(compose(s, r), t) == apply(s, apply(r, t)).
Subst compose(const Subst& s, const Subst& r);
// One-way matching of pattern against t, extending s. Returns false on clash.
bool match(const Term& pattern, const Term& t, Subst& s);

// Variables in first-occurrence order (left to right, depth first).
std::vector<std::string> vars(const Term& t);
void collect_vars(const Term& t, std::set<std::string>& out);
bool occurs(const std::string& x, const Term& t);
std::size_t count_occurrences(const std::string& x, const Term& t);
bool is_closed(const Term& t);
bool is_univariate(const Term& t);

// Path of 1-based argument indices from the root.
using Path = std::vector<int>;

// Argument predicate over (symbol, 1-based index) pairs.
struct ArgumentMarking {
  std::string name;
  std::set<std::pair<std::string, int>> liquid;

  bool holds(const std::string& f, int i) const { return liquid.count({f, i}) != 0; }
  ArgumentMarking intersect(const ArgumentMarking& o, std::string new_name = {}) const;
  bool subset_of(const ArgumentMarking& o) const;
  static ArgumentMarking universal(const Signature& sig, std::string name = "universal");
  std::string str() const;  // "f/1 g/2"
  friend bool operator==(const ArgumentMarking& a, const ArgumentMarking& b) {
    return a.name == b.name && a.liquid == b.liquid;
  }
};

struct Occurrence {
  Path path;
  bool liquid = false;
};

// One entry per occurrence of x in t; liquid iff every frame on the path
// uses a liquid argument position.
std::vector<Occurrence> occurrence_liquidity(const Term& t, const std::string& x,
                                             const ArgumentMarking& m);
// Frames (symbol, index) traversed on the way to each occurrence of x.
std::vector<std::vector<std::pair<std::string, int>>> occurrence_frames(const Term& t,
                                                                        const std::string& x);

// Deterministic fresh names "z0", "z1", ... avoiding the given set.
std::vector<std::string> fresh_variables(const std::set<std::string>& avoid, std::size_t count,
                                         const std::string& prefix = "z");

// Stateful generator used inside the ruloid pipeline.
class FreshNames {
 public:
  explicit FreshNames(std::string prefix = "_v") : prefix_(std::move(prefix)) {}
  std::string next() { return prefix_ + std::to_string(counter_++); }

 private:
  std::string prefix_;
  std::size_t counter_ = 0;
};

// Closed terms over the signature up to the given depth whose leaves are
// drawn from the constants and the optional extra leaves.
std::vector<Term> enumerate_terms(const Signature& sig, int depth, const std::vector<Term>& leaves,
                                  bool include_constants = true);

}  // namespace sosw

template <>
struct std::hash<sosw::Term> {
  std::size_t operator()(const sosw::Term& t) const noexcept { return t.hash(); }
};
