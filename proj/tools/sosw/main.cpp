#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sosw/decomp.hpp"
#include "sosw/dsl.hpp"
#include "sosw/equiv.hpp"
#include "sosw/error.hpp"
#include "sosw/format.hpp"
#include "sosw/harness.hpp"
#include "sosw/lts.hpp"
#include "sosw/modal.hpp"
#include "sosw/ruloid.hpp"
#include "sosw/semantics.hpp"

using json = nlohmann::json;
using namespace sosw;

namespace {

enum Exit { kPass = 0, kViolation = 1, kInconclusive = 2, kInputError = 3 };

struct Globals {
  std::optional<int> depth;
  std::uint64_t seed = 1;
  std::string report = "text";
  std::string tau_label = "tau";
};

bool json_out(const Globals& g) { return g.report == "json"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Precondition, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// A path, or the name of a bundled spec when no such file exists.
TSS load_spec(const std::string& arg) {
  if (std::filesystem::exists(arg)) return parse_spec(read_file(arg));
  return load_bundled(arg);
}

const MarkingSet& pick_markings(const TSS& P, const std::string& name, MarkingSet& fallback) {
  if (const MarkingSet* m = P.find_markings(name)) return *m;
  if (!name.empty()) throw Error(ErrorKind::Precondition, "no marking set named '" + name + "'");
  return fallback;
}

EquivalenceKind need_equivalence(const std::string& s) {
  auto k = parse_equivalence(s);
  if (!k) throw Error(ErrorKind::Precondition, "unknown equivalence '" + s + "'");
  return *k;
}

int state_of(const LTS& L, const std::string& name) {
  auto s = L.find(name);
  if (!s) throw Error(ErrorKind::Precondition, "no state named '" + name + "'");
  return *s;
}

void emit(const Globals& g, const json& j, const std::string& text) {
  if (json_out(g))
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

int exit_for(Result r) {
  switch (r) {
    case Result::Pass: return kPass;
    case Result::Fail: return kViolation;
    case Result::Inconclusive: return kInconclusive;
  }
  return kInputError;
}

json witnesses_json(const Verdict& v) {
  json arr = json::array();
  for (const auto& w : v.witnesses)
    arr.push_back({{"rule", w.rule}, {"condition", w.condition}, {"detail", w.detail},
                   {"inconclusive", w.inconclusive}});
  return arr;
}

int cmd_parse(const Globals& g, const std::string& file) {
  TSS P = load_spec(file);
  json j{{"name", P.name},
         {"actions", P.actions},
         {"rule_statements", P.schema_count},
         {"rules", P.rules.size()},
         {"markings", P.markings.size()},
         {"base", P.base.size()},
         {"expectations", P.expectations.size()}};
  emit(g, j, print_spec(P));
  return kPass;
}

int cmd_check(const Globals& g, const std::string& file, const std::string& format, const std::string& markings) {
  TSS P = load_spec(file);
  MarkingSet inferred = infer_minimal_predicates(P);
  const MarkingSet& m = pick_markings(P, markings, inferred);
  FormatVerdict v = check_format(P, format, m);
  std::ostringstream text;
  text << format << ": " << result_name(v.result) << "\n";
  for (const auto& w : v.witnesses)
    text << "  " << (w.inconclusive ? "? " : "x ") << w.condition << " [" << w.rule << "] " << w.detail << "\n";
  for (const auto& n : v.notes) text << "  note: " << n << "\n";
  json j{{"format", format},
         {"markings", v.markings.name},
         {"result", result_name(v.result)},
         {"failed_conditions", v.failed_conditions()},
         {"witnesses", witnesses_json(v)},
         {"notes", v.notes}};
  emit(g, j, text.str());
  return exit_for(v.result);
}

int cmd_ruloids(const Globals& g, const std::string& file, const std::string& term, const std::string& label,
                bool linear_only, bool negative) {
  TSS P = load_spec(file);
  Term t = parse_term(P.sig, term);
  RuloidOptions opts;
  if (g.depth) opts.depth_bound = *g.depth;
  opts.free_universe = P.base;
  RuloidEngine engine(P, opts);
  RuloidSet rs = negative ? engine.negative_ruloids(t, label)
                          : linear_only ? engine.linear_ruloids(t, label) : engine.ruloids(t, label);
  std::ostringstream text;
  json arr = json::array();
  for (const auto& r : rs.ruloids) {
    std::string s = print_rule(P.sig, r.rule);
    text << (r.linear ? "linear      " : "non-linear  ") << s << "\n";
    arr.push_back({{"rule", s}, {"linear", r.linear}});
  }
  if (rs.partial) text << "(partial: depth bound reached)\n";
  emit(g, json{{"source", term}, {"label", label}, {"partial", rs.partial}, {"ruloids", arr}}, text.str());
  return rs.partial ? kInconclusive : kPass;
}

int cmd_lts(const Globals& g, const std::string& file, const std::vector<std::string>& roots,
            const std::string& out) {
  TSS P = load_spec(file);
  std::vector<Term> ts;
  for (const auto& r : roots) ts.push_back(parse_term(P.sig, r, true));
  if (ts.empty()) ts = P.base;
  GeneratedLTS G = generate_lts(P, ts, g.depth.value_or(64));
  std::string aut = write_aut(G.lts);
  if (!out.empty()) {
    std::ofstream f(out);
    f << aut;
  }
  json states = json::array();
  for (std::size_t s = 0; s < G.lts.size(); ++s) states.push_back(G.lts.name(static_cast<int>(s)));
  emit(g, json{{"states", states}, {"transitions", G.lts.transition_count()}, {"partial", G.partial}},
       out.empty() ? aut : "wrote " + out + "\n");
  return G.partial ? kInconclusive : kPass;
}

LTS load_lts(const Globals& g, const std::string& path) { return read_aut(read_file(path), g.tau_label); }

int cmd_equiv(const Globals& g, const std::string& path, const std::string& kind_name, const std::string& p,
              const std::string& q) {
  LTS L = load_lts(g, path);
  EquivalenceKind kind = need_equivalence(kind_name);
  Partition part = equivalence(L, kind);
  if (p.empty()) {
    std::ostringstream text;
    std::vector<std::vector<std::string>> blocks(part.count);
    for (std::size_t s = 0; s < L.size(); ++s) blocks[part.block[s]].push_back(L.name(static_cast<int>(s)));
    for (const auto& b : blocks) {
      text << "{";
      for (std::size_t i = 0; i < b.size(); ++i) text << (i ? ", " : "") << b[i];
      text << "}\n";
    }
    emit(g, json{{"kind", kind_name}, {"blocks", blocks}}, text.str());
    return kPass;
  }
  int sp = state_of(L, p), sq = state_of(L, q);
  bool same = part.same(sp, sq);
  json j{{"kind", kind_name}, {"equivalent", same}};
  std::string text = p + (same ? " ~ " : " !~ ") + q + " (" + kind_name + ")\n";
  if (!same && kind.base != EquivKind::Branching) {
    if (auto f = distinguishing_formula(L, sp, sq, class_for(kind))) {
      j["formula"] = f->str();
      text += "distinguishing formula: " + f->str() + "\n";
    }
  }
  emit(g, j, text);
  return same ? kPass : kViolation;
}

int cmd_sat(const Globals& g, const std::string& path, const std::string& state, const std::string& formula) {
  LTS L = load_lts(g, path);
  Formula f = parse_formula(formula);
  bool holds = satisfies(L, state_of(L, state), f);
  emit(g, json{{"state", state}, {"formula", f.str()}, {"holds", holds}},
       state + (holds ? " |= " : " |/= ") + f.str() + "\n");
  return holds ? kPass : kViolation;
}

int cmd_decompose(const Globals& g, const std::string& file, const std::string& term, const std::string& formula,
                  const std::string& markings, bool dr) {
  TSS P = load_spec(file);
  MarkingSet inferred = infer_minimal_predicates(P);
  const MarkingSet& m = pick_markings(P, markings, inferred);
  Term t = parse_term(P.sig, term);
  Formula phi = parse_formula(formula);
  DecompOptions opts;
  opts.ruloids.free_universe = P.base;
  if (g.depth) opts.ruloids.depth_bound = *g.depth;
  auto maps = dr ? decompose_dr(P, t, phi, m.gamma(), opts) : decompose(P, t, phi, m.gamma(), opts);
  std::ostringstream text;
  json arr = json::array();
  for (const auto& mp : maps) {
    text << mp.str() << "\n";
    json e = json::object();
    for (const auto& [x, f] : mp.psi) e[x] = f.str();
    arr.push_back(e);
  }
  if (maps.empty()) text << "(no mappings: no instance satisfies the formula)\n";
  emit(g, json{{"term", term}, {"formula", phi.str()}, {"mappings", arr}}, text.str());
  return kPass;
}

int cmd_congruence(const Globals& g, const std::string& file, const std::string& kind_name) {
  TSS P = load_spec(file);
  EquivalenceKind kind = need_equivalence(kind_name);
  int depth = g.depth.value_or(1);
  CongruenceReport rep = congruence_check(P, kind, depth, P.base);
  std::ostringstream text;
  text << kind_name << " depth " << depth << ": " << rep.contexts << " contexts, " << rep.pairs_tested
       << " pairs, " << rep.violations.size() << " violations\n";
  json arr = json::array();
  for (const auto& v : rep.violations) {
    std::string l = P.sig.print(v.left_filled), r = P.sig.print(v.right_filled);
    text << "  " << l << " !~ " << r;
    json e{{"left", l}, {"right", r}};
    if (v.witness) {
      text << "  witness " << v.witness->str() << (v.witness_verified ? " (verified)" : " (unverified)");
      e["witness"] = v.witness->str();
      e["verified"] = v.witness_verified;
    }
    text << "\n";
    arr.push_back(e);
  }
  emit(g, json{{"kind", kind_name}, {"depth", depth}, {"contexts", rep.contexts}, {"pairs", rep.pairs_tested},
               {"violations", arr}},
       text.str());
  return rep.clean() ? kPass : kViolation;
}

int cmd_suite(const Globals& g, const std::vector<std::string>& files) {
  SuiteSummary sum;
  if (files.empty()) {
    sum = run_bundled_suite();
  } else {
    for (const auto& f : files) {
      TSS P = load_spec(f);
      auto items = run_expectations(P, P.name);
      sum.items.insert(sum.items.end(), items.begin(), items.end());
    }
  }
  std::ostringstream text;
  json arr = json::array();
  for (const auto& it : sum.items) {
    const char* st = it.ok ? "PASS" : it.inconclusive ? "INCONCLUSIVE" : "FAIL";
    text << st << "  " << it.spec << ": " << it.expectation;
    if (!it.detail.empty()) text << "  (" << it.detail << ")";
    text << "\n";
    arr.push_back({{"spec", it.spec}, {"expectation", it.expectation}, {"status", st}, {"detail", it.detail}});
  }
  emit(g, json{{"items", arr}, {"ok", sum.ok()}}, text.str());
  if (sum.ok()) return kPass;
  return sum.inconclusive() ? kInconclusive : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural operational semantics workbench for weak bisimulation formats"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--depth", g.depth, "Depth bound (context depth, LTS exploration, ruloid nesting)");
  app.add_option("--seed", g.seed, "Random seed");
  app.add_option("--report", g.report, "Output style")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tau-label", g.tau_label, "Label read as the silent action in .aut files");

  std::string file, term, label, format, markings, formula, kind, p, q, out, state;
  std::vector<std::string> roots, files;
  bool linear_only = false, negative = false, dr = false;
  std::function<int()> run;

  auto* parse = app.add_subcommand("parse", "Parse a spec and print it back");
  parse->add_option("spec", file, "Spec file or bundled name")->required();
  parse->callback([&] { run = [&] { return cmd_parse(g, file); }; });

  auto* check = app.add_subcommand("check", "Check a rule format");
  check->add_option("spec", file)->required();
  check->add_option("format", format)->required()->check(CLI::IsMember(format_names()));
  check->add_option("--markings", markings, "Marking set name (default: first, or inferred)");
  check->callback([&] { run = [&] { return cmd_check(g, file, format, markings); }; });

  auto* ruloids = app.add_subcommand("ruloids", "List ruloids for a source term and label");
  ruloids->add_option("spec", file)->required();
  ruloids->add_option("term", term)->required();
  ruloids->add_option("label", label)->required();
  ruloids->add_flag("--linear", linear_only, "Linear ruloids only");
  ruloids->add_flag("--negative", negative, "Ruloids for the negative literal");
  ruloids->callback([&] { run = [&] { return cmd_ruloids(g, file, term, label, linear_only, negative); }; });

  auto* lts = app.add_subcommand("lts", "Generate the LTS of closed terms (Aldebaran output)");
  lts->add_option("spec", file)->required();
  lts->add_option("terms", roots, "Root terms (default: the base processes)");
  lts->add_option("-o,--output", out);
  lts->callback([&] { run = [&] { return cmd_lts(g, file, roots, out); }; });

  auto* equiv = app.add_subcommand("equiv", "Equivalence classes of an .aut file, or compare two states");
  equiv->add_option("aut", file)->required();
  equiv->add_option("kind", kind, "e.g. rooted-delay, weak, strong")->required();
  equiv->add_option("p", p);
  equiv->add_option("q", q);
  equiv->callback([&] { run = [&] { return cmd_equiv(g, file, kind, p, q); }; });

  auto* sat = app.add_subcommand("sat", "Model check a formula at a state of an .aut file");
  sat->add_option("aut", file)->required();
  sat->add_option("state", state)->required();
  sat->add_option("formula", formula)->required();
  sat->callback([&] { run = [&] { return cmd_sat(g, file, state, formula); }; });

  auto* dec = app.add_subcommand("decompose", "Decompose a modal formula through an open term");
  dec->add_option("spec", file)->required();
  dec->add_option("term", term)->required();
  dec->add_option("formula", formula)->required();
  dec->add_option("--markings", markings);
  dec->add_flag("--dr", dr, "Delay-resistant variant");
  dec->callback([&] { run = [&] { return cmd_decompose(g, file, term, formula, markings, dr); }; });

  auto* cong = app.add_subcommand("congruence", "Search contexts for congruence violations over the base");
  cong->add_option("spec", file)->required();
  cong->add_option("kind", kind)->required();
  cong->callback([&] { run = [&] { return cmd_congruence(g, file, kind); }; });

  auto* suite = app.add_subcommand("suite", "Run the expectations embedded in specs (default: bundled)");
  suite->add_option("specs", files);
  suite->callback([&] { run = [&] { return cmd_suite(g, files); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kPass : kInputError;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << "sosw: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::BoundExceeded:
      case ErrorKind::PartialRuloids:
      case ErrorKind::CapExceeded:
      case ErrorKind::SubsetBlowup:
      case ErrorKind::InfiniteDecomposition:
        return kInconclusive;
      default:
        return kInputError;
    }
  } catch (const std::exception& e) {
    std::cerr << "sosw: " << e.what() << "\n";
    return kInputError;
  }
}
