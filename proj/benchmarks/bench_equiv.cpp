#include <benchmark/benchmark.h>

#include "sosw/equiv.hpp"
#include "sosw/lts.hpp"
#include "sosw/modal.hpp"

using namespace sosw;

static void BM_Bisimilarity(benchmark::State& st) {
  LTS L = random_lts(42, static_cast<int>(st.range(0)), 3);
  const auto kind = static_cast<EquivKind>(st.range(1));
  for (auto _ : st) benchmark::DoNotOptimize(bisimilarity(L, kind));
  st.SetLabel(std::to_string(L.size()) + " states");
}
BENCHMARK(BM_Bisimilarity)
    ->ArgsProduct({{64, 256, 1024}, {static_cast<long>(EquivKind::Strong), static_cast<long>(EquivKind::Delay),
                                     static_cast<long>(EquivKind::Weak)}});

static void BM_RootedDelay(benchmark::State& st) {
  LTS L = random_lts(7, static_cast<int>(st.range(0)), 3);
  for (auto _ : st) benchmark::DoNotOptimize(equivalence(L, {EquivKind::Delay, true}));
}
BENCHMARK(BM_RootedDelay)->Arg(256)->Arg(1024);

static void BM_Oracle(benchmark::State& st) {
  LTS L = random_lts(9, 12, 3);
  for (auto _ : st) benchmark::DoNotOptimize(oracle_bisimilarity(L, {EquivKind::Weak, false}));
}
BENCHMARK(BM_Oracle);

static void BM_DistinguishingFormula(benchmark::State& st) {
  LTS L = random_lts(11, 64, 3);
  for (auto _ : st)
    for (std::size_t q = 1; q < L.size(); ++q) benchmark::DoNotOptimize(distinguishing_formula(L, 0, q, FormulaClass::Ord));
}
BENCHMARK(BM_DistinguishingFormula);

BENCHMARK_MAIN();
