#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "m2o/lattice.hpp"

namespace {

void BM_mod_coarse(benchmark::State& state) {
  const m2o::NestedLatticePair pair(4, 11);
  const std::vector<double> x{17.3, -42.9, 5.501, -0.25};
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair.mod_coarse(x));
  }
}
BENCHMARK(BM_mod_coarse);

void BM_carry_reconstruct(benchmark::State& state) {
  const m2o::NestedLatticePair pair(4, 7);
  const std::vector<std::vector<std::int64_t>> points{
      {3, -2, 0, 1}, {-3, 3, 2, -1}, {2, 2, -3, 3}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::carry_reconstruct(pair, points));
  }
}
BENCHMARK(BM_carry_reconstruct);

// q^(N K) enumeration cost: 4^3 = 64 states vs 3^6 = 729 states.
void BM_exact_leakage_q4(benchmark::State& state) {
  const m2o::NestedLatticePair pair(1, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::exact_leakage(pair, 3));
  }
}
BENCHMARK(BM_exact_leakage_q4);

void BM_exact_leakage_q3_dim2(benchmark::State& state) {
  const m2o::NestedLatticePair pair(2, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::exact_leakage(pair, 3));
  }
}
BENCHMARK(BM_exact_leakage_q3_dim2);

void BM_wrap_probability(benchmark::State& state) {
  const m2o::NestedLatticePair pair(1, 16);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        m2o::wrap_probability(pair, {4.0, 2.0}, 1.0, state.range(0), 7));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_wrap_probability)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
