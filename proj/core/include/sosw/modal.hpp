#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sosw/equiv.hpp"
#include "sosw/lts.hpp"

namespace sosw {

// Immutable modal formula. Equality and ordering use the canonical text.
class Formula {
 public:
  enum class Kind { Conj, Neg, Diamond, Eps };

  static Formula top() { return conj({}); }
  static Formula conj(std::vector<Formula> parts);
  static Formula neg(Formula f);
  static Formula diamond(std::string label, Formula f);
  static Formula eps(Formula f);

  Kind kind() const { return node_->kind; }
  const std::string& label() const { return node_->label; }  // Diamond only
  const std::vector<Formula>& kids() const { return node_->kids; }
  const Formula& sub() const { return node_->kids.front(); }  // Neg, Diamond, Eps
  bool is_top() const { return kind() == Kind::Conj && kids().empty(); }
  const std::string& str() const { return node_->text; }
  std::size_t size() const;
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b) { return a.node_ == b.node_ || a.str() == b.str(); }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) { return a.str() <=> b.str(); }

 private:
  struct Node {
    Kind kind;
    std::string label;
    std::vector<Formula> kids;
    std::string text;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Syntax: T, ~phi, /\[phi, ...], <a>phi, <tau>phi, <eps>phi, parentheses.
Formula parse_formula(const std::string& text);

enum class FormulaClass { O, Od, Ord, Ow, Orw };
const char* class_name(FormulaClass c);
std::optional<FormulaClass> parse_class(const std::string& s);  // O, Od, Ord, Ow, Orw
FormulaClass class_for(const EquivalenceKind& k);                // delay -> Od, rooted-weak -> Orw, ...

// Syntactic membership in the grammar of the class, after flattening
// nested conjunctions.
bool in_class(const Formula& f, FormulaClass c);

// Sound rewrites to a fixpoint: <eps><eps>phi -> <eps>phi, ~~phi -> phi,
// conjunction flattening, removal of T conjuncts, sorting and deduplication
// of conjuncts, /\[phi] -> phi.
Formula normalize(const Formula& f);

// Satisfaction sets, memoized per formula node and per formula text.
class ModelChecker {
 public:
  explicit ModelChecker(const LTS& L);
  const std::vector<char>& eval(const Formula& f);
  bool satisfies(int state, const Formula& f) { return eval(f)[state] != 0; }
  const LTS& lts() const { return L_; }

 private:
  const LTS& L_;
  std::vector<std::vector<int>> closure_;
  std::unordered_map<std::string, std::vector<char>> by_text_;
  std::unordered_map<const void*, std::pair<Formula, const std::vector<char>*>> memo_;
};

bool satisfies(const LTS& L, int state, const Formula& f);

// A formula of class c that p satisfies and q does not, or nothing when p
// and q are equivalent for the matching equivalence (strong for O).
std::optional<Formula> distinguishing_formula(const LTS& L, int p, int q, FormulaClass c);

}  // namespace sosw
