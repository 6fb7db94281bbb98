#include <benchmark/benchmark.h>

#include "sosw/decomp.hpp"
#include "sosw/dsl.hpp"
#include "sosw/format.hpp"
#include "sosw/harness.hpp"
#include "sosw/ruloid.hpp"
#include "sosw/semantics.hpp"

using namespace sosw;

static void BM_Ruloids(benchmark::State& st) {
  TSS P = load_bundled("kleene");
  auto terms = open_terms(P.sig, 2);
  for (auto _ : st) {
    RuloidEngine E(P);  // fresh engine so the memo does not hide the work
    for (const auto& t : terms) benchmark::DoNotOptimize(E.ruloids(t, "a"));
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(terms.size()));
}
BENCHMARK(BM_Ruloids);

static void BM_FormatCheck(benchmark::State& st) {
  TSS P = load_bundled("priority");
  const MarkingSet m = *P.find_markings("");
  for (auto _ : st) benchmark::DoNotOptimize(check_format(P, "syntactic-rooted-delay", m));
}
BENCHMARK(BM_FormatCheck);

static void BM_InferPredicates(benchmark::State& st) {
  TSS P = load_bundled("premise_merge");
  for (auto _ : st) benchmark::DoNotOptimize(infer_minimal_predicates(P));
}
BENCHMARK(BM_InferPredicates);

static void BM_DecomposeDr(benchmark::State& st) {
  TSS P = load_bundled("bpa");
  const Term t = parse_term(P.sig, "(x1 + x2) . x3");
  const Formula phi = parse_formula("<eps><a>~<eps><b>T");
  const ArgumentMarking gamma = P.find_markings("")->gamma();
  for (auto _ : st) benchmark::DoNotOptimize(decompose_dr(P, t, phi, gamma));
}
BENCHMARK(BM_DecomposeDr);

static void BM_LtsGeneration(benchmark::State& st) {
  TSS P = load_bundled("kleene");
  for (auto _ : st) benchmark::DoNotOptimize(generate_lts(P, P.base, 64));
}
BENCHMARK(BM_LtsGeneration);
