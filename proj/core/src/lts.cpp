#include "sosw/lts.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <set>
#include <sstream>

#include "sosw/error.hpp"
#include "sosw/tss.hpp"

namespace sosw {

int LTS::add_state(const std::string& name) {
  int id = static_cast<int>(names_.size());
  names_.push_back(name);
  terms_.emplace_back();
  out_.emplace_back();
  by_name_.emplace(name, id);
  return id;
}

int LTS::add_state(const Term& t, const std::string& name) {
  int id = add_state(name);
  terms_[id] = t;
  by_term_.emplace(t, id);
  return id;
}

void LTS::add_transition(int from, const std::string& label, int to) {
  auto& v = out_[from];
  std::pair<std::string, int> e{label, to};
  auto it = std::lower_bound(v.begin(), v.end(), e);
  if (it == v.end() || *it != e) v.insert(it, e);
}

std::size_t LTS::transition_count() const {
  std::size_t n = 0;
  for (const auto& v : out_) n += v.size();
  return n;
}

std::optional<int> LTS::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> LTS::find(const Term& t) const {
  auto it = by_term_.find(t);
  if (it == by_term_.end()) return std::nullopt;
  return it->second;
}

std::vector<Transition> LTS::transitions() const {
  std::vector<Transition> out;
  for (int s = 0; s < static_cast<int>(size()); ++s)
    for (const auto& [l, t] : out_[s]) out.push_back({s, l, t});
  return out;
}

std::vector<std::string> LTS::labels() const {
  std::set<std::string> ls;
  for (const auto& v : out_)
    for (const auto& e : v) ls.insert(e.first);
  return {ls.begin(), ls.end()};
}

namespace {

struct AutReader {
  const std::string& s;
  std::size_t i = 0;
  int line = 1, col = 1;

  [[noreturn]] void fail(const std::string& m) { throw ParseError(m, line, col); }
  void adv() {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }
  void ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) adv();
  }
  void eol() {
    ws();
    if (i < s.size() && s[i] != '\n') fail("expected end of line");
    if (i < s.size()) adv();
  }
  void skip_blank_lines() {
    while (true) {
      std::size_t save = i;
      int sl = line, sc = col;
      ws();
      if (i < s.size() && s[i] == '\n') {
        adv();
        continue;
      }
      i = save;
      line = sl;
      col = sc;
      return;
    }
  }
  void ch(char c) {
    ws();
    if (i >= s.size() || s[i] != c) fail(std::string("expected '") + c + "'");
    adv();
  }
  long num() {
    ws();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) fail("expected number");
    long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      adv();
    }
    return v;
  }
  std::string label() {
    ws();
    if (i < s.size() && s[i] == '"') {
      adv();
      std::string out;
      while (i < s.size() && s[i] != '"' && s[i] != '\n') {
        out += s[i];
        adv();
      }
      if (i >= s.size() || s[i] != '"') fail("unterminated label");
      adv();
      return out;
    }
    std::string out;
    while (i < s.size() && s[i] != ',' && s[i] != ')' && s[i] != '\n') {
      out += s[i];
      adv();
    }
    while (!out.empty() && std::isspace(static_cast<unsigned char>(out.back()))) out.pop_back();
    if (out.empty()) fail("expected label");
    return out;
  }
};

}  // namespace

LTS read_aut(const std::string& text, const std::string& tau_label) {
  AutReader r{text};
  r.skip_blank_lines();
  r.ws();
  if (text.compare(r.i, 3, "des") != 0) r.fail("expected 'des' header");
  for (int k = 0; k < 3; ++k) r.adv();
  r.ch('(');
  long init = r.num();
  r.ch(',');
  long ntrans = r.num();
  r.ch(',');
  long nstates = r.num();
  r.ch(')');
  r.eol();
  if (init >= nstates && nstates > 0) r.fail("initial state out of range");
  LTS L;
  for (long k = 0; k < nstates; ++k) L.add_state(std::to_string(k));
  L.initial = static_cast<int>(init);
  long seen = 0;
  while (true) {
    r.skip_blank_lines();
    r.ws();
    if (r.i >= text.size()) break;
    r.ch('(');
    long from = r.num();
    r.ch(',');
    std::string l = r.label();
    r.ch(',');
    long to = r.num();
    r.ch(')');
    r.eol();
    if (from >= nstates || to >= nstates) throw ParseError("state index out of range", r.line - 1, 1);
    if (l == tau_label) l = kTau;
    L.add_transition(static_cast<int>(from), l, static_cast<int>(to));
    ++seen;
  }
  if (seen != ntrans)
    throw ParseError("header declares " + std::to_string(ntrans) + " transitions but " + std::to_string(seen) +
                         " were given",
                     r.line, r.col);
  return L;
}

std::string write_aut(const LTS& L) {
  std::ostringstream o;
  o << "des (" << L.initial << "," << L.transition_count() << "," << L.size() << ")\n";
  for (const auto& t : L.transitions()) o << "(" << t.from << ",\"" << t.label << "\"," << t.to << ")\n";
  return o.str();
}

std::vector<std::vector<int>> tau_closure(const LTS& L) {
  const int n = static_cast<int>(L.size());
  std::vector<std::vector<int>> out(n);
  std::vector<int> mark(n, -1);
  for (int s = 0; s < n; ++s) {
    std::vector<int> stack{s};
    mark[s] = s;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      out[s].push_back(u);
      for (const auto& [l, v] : L.out(u))
        if (l == kTau && mark[v] != s) {
          mark[v] = s;
          stack.push_back(v);
        }
    }
    std::sort(out[s].begin(), out[s].end());
  }
  return out;
}

LTS random_lts(std::uint64_t seed, int max_states, int actions, int max_out) {
  std::vector<std::string> names;
  for (int a = 0; a < actions; ++a) names.push_back("a" + std::to_string(a));
  return random_lts(seed, max_states, names, max_out);
}

LTS random_lts(std::uint64_t seed, int max_states, const std::vector<std::string>& actions, int max_out) {
  std::mt19937_64 rng(seed);
  const int na = static_cast<int>(actions.size());
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  LTS L;
  const int n = pick(1, std::max(1, max_states));
  for (int s = 0; s < n; ++s) L.add_state("s" + std::to_string(s));
  for (int s = 0; s < n; ++s) {
    const int k = pick(0, max_out);
    for (int i = 0; i < k; ++i) {
      const int a = pick(0, na);  // na means tau
      L.add_transition(s, a == na ? kTau : actions[a], pick(0, n - 1));
    }
  }
  return L;
}

}  // namespace sosw
