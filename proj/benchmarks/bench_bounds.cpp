#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "m2o/bounds.hpp"
#include "m2o/layering.hpp"

namespace {

m2o::ChannelConfig five_user_config() {
  return m2o::ChannelConfig{5,
                            {0.3, 2.0, 7.5, 40.0},
                            {12.0, 90.0, 5.5, 300.0, 48.0}};
}

void BM_gap_report(benchmark::State& state) {
  const m2o::ChannelConfig config = five_user_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::gap_report(config));
  }
}
BENCHMARK(BM_gap_report);

void BM_build_layer_plan(benchmark::State& state) {
  const m2o::ChannelConfig config = five_user_config();
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::build_layer_plan(config));
  }
}
BENCHMARK(BM_build_layer_plan);

void BM_layer_contributions(benchmark::State& state) {
  const m2o::ChannelConfig config = five_user_config();
  const m2o::LayerPlan plan = m2o::build_layer_plan(config);
  const auto caps = m2o::layer_rate_caps(plan);
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::layer_sum_contributions(config, plan, caps));
  }
}
BENCHMARK(BM_layer_contributions);

void BM_dof_sweep(benchmark::State& state) {
  std::vector<double> powers;
  for (int e = 10; e <= 40; e += 2) powers.push_back(std::pow(2.0, e));
  const m2o::ChannelConfig base{3, {1.0, 1.0}, {1.0, 1.0, 1.0}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(m2o::dof_sweep(base, powers));
  }
}
BENCHMARK(BM_dof_sweep);

}  // namespace

BENCHMARK_MAIN();
