#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sosw/term.hpp"

namespace sosw {

inline const std::string kTau = "tau";

struct Literal {
  bool positive = true;
  Term lhs;
  std::string label;
  Term rhs;  // invalid for negative literals

  static Literal pos(Term l, std::string a, Term r) { return {true, std::move(l), std::move(a), std::move(r)}; }
  static Literal neg(Term l, std::string a) { return {false, std::move(l), std::move(a), Term()}; }

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.positive == b.positive && a.lhs == b.lhs && a.label == b.label &&
           (!a.positive || a.rhs == b.rhs);
  }
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b);
};

Literal apply(const Subst& s, const Literal& l);
// Two literals deny each other when one is t->a u and the other t-a!->.
bool denies(const Literal& a, const Literal& b);

struct Rule {
  std::string name;
  std::vector<Literal> premises;  // sorted, duplicate free
  Literal conclusion;

  const Term& source() const { return conclusion.lhs; }
  bool standard() const { return conclusion.positive; }
  void normalize();  // sort and deduplicate premises
  std::vector<Literal> positive_premises() const;
  std::vector<Literal> negative_premises() const;

  // Equality ignores the name.
  bool same_shape(const Rule& o) const { return premises == o.premises && conclusion == o.conclusion; }
  friend bool operator==(const Rule& a, const Rule& b) { return a.name == b.name && a.same_shape(b); }
};

Rule apply(const Subst& s, const Rule& r);
std::set<std::string> rule_vars(const Rule& r);
// Canonical bijective renaming. Source variables come first, then premise
// rhs variables in canonical premise order. With keep_source the source
// variables keep their names and the others become y1, y2, ...
Rule alpha_normal(const Rule& r, bool keep_source = false, Subst* renaming = nullptr);
// Renames every variable of r with the generator.
Rule rename_apart(const Rule& r, FreshNames& fresh);

struct RuleClassification {
  bool standard = false;
  bool positive = false;
  bool ntytt = false;
  bool ntyxt = false;
  bool ntyft = false;
  bool nxytt = false;
  bool xyntt = false;
  bool xynft = false;
  bool decent = false;
  bool has_lookahead = false;
  bool has_free_variables = false;
};

RuleClassification classify(const Rule& r);
std::vector<std::string> free_variables(const Rule& r);

// H^{s-}: negative premises t-a!-> for which t-tau!-> is also in H.
std::vector<Literal> stable_negatives(const std::vector<Literal>& H);

bool is_patience_rule(const Rule& r, const std::string& f, int i);
Rule make_patience_rule(const Symbol& f, int i);

struct MarkingSet {
  std::string name = "default";
  ArgumentMarking aleph{"aleph", {}};
  ArgumentMarking lambda{"lambda", {}};
  std::map<std::string, ArgumentMarking> delta;  // label -> Delta_label; absent means empty

  ArgumentMarking gamma() const { return aleph.intersect(lambda, "aleph&lambda"); }
  ArgumentMarking delta_for(const std::string& label) const;
  friend bool operator==(const MarkingSet& a, const MarkingSet& b) {
    return a.name == b.name && a.aleph.liquid == b.aleph.liquid && a.lambda.liquid == b.lambda.liquid &&
           a.delta == b.delta;
  }
};

enum class EquivKind { Strong, Branching, Delay, Weak };
struct EquivalenceKind {
  EquivKind base = EquivKind::Delay;
  bool rooted = false;
  friend bool operator==(const EquivalenceKind&, const EquivalenceKind&) = default;
};
std::string equivalence_name(const EquivalenceKind& k);  // e.g. "rooted-delay"
std::optional<EquivalenceKind> parse_equivalence(const std::string& s);

struct Expectation {
  enum class Kind { Format, Congruence, Violation } kind = Kind::Format;
  std::string format;
  std::string markings;  // empty: first marking set
  std::string result;    // pass | fail | inconclusive
  std::optional<std::vector<std::string>> conditions;
  EquivalenceKind equiv;
  int depth = 1;
  Term left, right;
  friend bool operator==(const Expectation& a, const Expectation& b) {
    return a.kind == b.kind && a.format == b.format && a.markings == b.markings &&
           a.result == b.result && a.conditions == b.conditions && a.equiv == b.equiv &&
           a.depth == b.depth && a.left == b.left && a.right == b.right;
  }
};

struct TSS {
  std::string name;
  Signature sig;
  std::vector<std::string> actions;  // A, without tau
  std::vector<Rule> rules;
  std::vector<MarkingSet> markings;
  std::vector<Term> base;
  std::vector<Expectation> expectations;
  std::size_t schema_count = 0;  // rule statements before schema expansion

  std::vector<std::string> labels() const;  // A followed by tau
  bool has_label(const std::string& l) const;
  const MarkingSet* find_markings(const std::string& name) const;  // empty name: first set
  // Throws UnknownAction / Arity on ill-formed rules.
  void validate() const;

  friend bool operator==(const TSS& a, const TSS& b) {
    return a.name == b.name && a.sig == b.sig && a.actions == b.actions && a.rules == b.rules &&
           a.markings == b.markings && a.base == b.base && a.expectations == b.expectations;
  }
};

struct PatienceReport {
  bool patient = true;
  std::vector<std::pair<std::string, int>> missing;
};
PatienceReport is_gamma_patient(const TSS& P, const ArgumentMarking& gamma);

struct FormatViolation {
  std::string rule;
  std::string reason;
};
std::vector<FormatViolation> ready_simulation_violations(const TSS& P);
inline bool ready_simulation_format(const TSS& P) { return ready_simulation_violations(P).empty(); }

std::string print_literal(const Signature& sig, const Literal& l);
std::string print_rule(const Signature& sig, const Rule& r);

}  // namespace sosw
