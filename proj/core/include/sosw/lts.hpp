#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sosw/term.hpp"

namespace sosw {

struct Transition {
  int from = 0;
  std::string label;
  int to = 0;
  friend auto operator<=>(const Transition&, const Transition&) = default;
};

// Finite labelled transition system. States are dense integers with a
// display name; states generated from terms keep the term.
class LTS {
 public:
  int add_state(const std::string& name);
  int add_state(const Term& t, const std::string& name);
  // Adds the transition unless already present.
  void add_transition(int from, const std::string& label, int to);

  std::size_t size() const { return names_.size(); }
  std::size_t transition_count() const;
  const std::string& name(int s) const { return names_[s]; }
  const Term& term(int s) const { return terms_[s]; }
  std::optional<int> find(const std::string& name) const;
  std::optional<int> find(const Term& t) const;
  const std::vector<std::pair<std::string, int>>& out(int s) const { return out_[s]; }
  std::vector<Transition> transitions() const;
  // Labels occurring on transitions, tau included whenever present.
  std::vector<std::string> labels() const;

  int initial = 0;

 private:
  std::vector<std::string> names_;
  std::vector<Term> terms_;
  std::vector<std::vector<std::pair<std::string, int>>> out_;
  std::map<std::string, int> by_name_;
  std::map<Term, int> by_term_;
};

// Aldebaran format. tau_label is read as tau; tau is always written as "tau".
LTS read_aut(const std::string& text, const std::string& tau_label = "tau");
std::string write_aut(const LTS& L);

// Reflexive-transitive tau closure, one sorted vector per state.
std::vector<std::vector<int>> tau_closure(const LTS& L);

// Seeded random LTS with 1..max_states states over actions a0, a1, ... and
// tau. Each state gets up to max_out outgoing transitions.
LTS random_lts(std::uint64_t seed, int max_states, int actions, int max_out = 3);
// Same, over the given visible labels.
LTS random_lts(std::uint64_t seed, int max_states, const std::vector<std::string>& actions, int max_out = 3);

}  // namespace sosw
