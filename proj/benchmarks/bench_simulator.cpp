#include <benchmark/benchmark.h>

#include <cstdint>

#include "m2o/lattice.hpp"
#include "m2o/simulator.hpp"

namespace {

m2o::ChannelConfig wide_config() {
  return m2o::ChannelConfig{3, {1.0, 1.0}, {256.0, 256.0, 256.0}};
}

m2o::ChannelConfig stacked_config() {
  return m2o::ChannelConfig{3, {64.0, 1.0}, {64.0, 4096.0, 4096.0}};
}

void BM_build_sim_plan(benchmark::State& state) {
  const m2o::ChannelConfig config = stacked_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::build_sim_plan(config, 1.0, 2, 42));
  }
}
BENCHMARK(BM_build_sim_plan);

void BM_receiver_K_trials(benchmark::State& state) {
  const m2o::SimPlan plan = m2o::build_sim_plan(wide_config(), 0.25, 1, 42);
  const std::int64_t trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        m2o::simulate_receiver_K(plan, trials, 7, {4.0}));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_receiver_K_trials)->Arg(1000)->Arg(10000);

void BM_end_to_end(benchmark::State& state) {
  const m2o::ChannelConfig config = stacked_config();
  const std::int64_t trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        m2o::end_to_end_report(config, 1.0, trials, 7, 1, 1, {1.0}));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_end_to_end)->Arg(1000);

void BM_mod_channel(benchmark::State& state) {
  const m2o::NestedLatticePair pair(1, 8);
  const m2o::SingleLayerChannel channel =
      m2o::make_single_layer(pair, 21.0, 3);
  const std::int64_t trials = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        m2o::mod_channel_error_rate(channel, 2.0, 1.0, trials, 5));
  }
  state.SetItemsProcessed(state.iterations() * trials);
}
BENCHMARK(BM_mod_channel)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
