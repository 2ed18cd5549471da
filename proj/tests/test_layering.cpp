#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "m2o/layering.hpp"
#include "m2o/rng.hpp"

using namespace m2o;

namespace {

ChannelConfig worked_config() {
  return ChannelConfig{3, {4.0, 9.0}, {4.0, 2.0, 20.0}};
}

// Delimiters recomputed the slow way: collect, filter, sort, dedupe.
std::vector<double> oracle_delimiters(const ChannelConfig& config) {
  std::set<double> d;
  d.insert(1.0);
  for (int i = 0; i < config.K - 1; ++i) {
    if (config.gains[i] > 1.0) d.insert(config.gains[i]);
    if (config.gains[i] * config.powers[i] > 1.0) {
      d.insert(config.gains[i] * config.powers[i]);
    }
  }
  if (config.powers.back() > 1.0) d.insert(config.powers.back());
  return {d.begin(), d.end()};
}

ChannelConfig random_config(Rng& rng, int K) {
  ChannelConfig config;
  config.K = K;
  for (int i = 0; i < K - 1; ++i) {
    config.gains.push_back(std::pow(10.0, -2.0 + 4.0 * rng.uniform()));
  }
  for (int i = 0; i < K; ++i) {
    config.powers.push_back(std::pow(10.0, -1.0 + 5.0 * rng.uniform()));
  }
  return config;
}

}  // namespace

TEST_CASE("worked three-user plan reproduces the full decomposition") {
  const LayerPlan plan = build_layer_plan(worked_config());

  REQUIRE(plan.M() == 5);
  const std::vector<double> expect_delims{1, 4, 9, 16, 18, 20};
  REQUIRE(plan.delimiters == expect_delims);

  // Interval bookkeeping.
  CHECK(plan.intervals[0].index == 0);
  CHECK(std::isinf(plan.intervals[0].floor));
  CHECK(plan.intervals[0].ceiling == 1.0);
  CHECK(plan.intervals[3].floor == 9.0);
  CHECK(plan.intervals[3].ceiling == 16.0);
  CHECK(plan.intervals[3].width() == 7.0);

  // Occupants per layer.
  CHECK(plan.active[0].empty());
  CHECK(plan.active[1] == std::vector<int>{3});
  CHECK(plan.active[2] == std::vector<int>{1, 3});
  CHECK(plan.active[3] == std::vector<int>{1, 2, 3});
  CHECK(plan.active[4] == std::vector<int>{2, 3});
  CHECK(plan.active[5] == std::vector<int>{3});

  // Exact allocations: a_k P_{k,m} = width(m) on every occupied layer.
  CHECK(plan.alloc[0] == std::vector<double>{0, 0, 1.25, 1.75, 0, 0});
  CHECK(plan.alloc[1][3] == doctest::Approx(7.0 / 9.0).epsilon(1e-15));
  CHECK(plan.alloc[1][4] == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
  CHECK(plan.alloc[1][0] == 0.0);
  CHECK(plan.alloc[2] == std::vector<double>{0, 3, 5, 7, 2, 2});

  CHECK(plan.user_layers[0] == std::vector<int>{2, 3});
  CHECK(plan.user_layers[1] == std::vector<int>{3, 4});
  CHECK(plan.user_layers[2] == std::vector<int>{1, 2, 3, 4, 5});

  const AlignmentReport report = check_alignment(worked_config(), plan);
  CHECK(report.aligned);
  CHECK(report.feasible);
  CHECK(report.max_violation <= 1e-12);
}

TEST_CASE("users below the noise floor hide clamped to their budget") {
  // 1/a - 1 is 1 for user 1 and 3 for user 2; user 2 only has power 1.
  const ChannelConfig config{3, {0.5, 0.25}, {1.0, 1.0, 1.0}};
  const LayerPlan plan = build_layer_plan(config);
  CHECK(plan.M() == 0);
  CHECK(plan.alloc[0][0] == 1.0);
  CHECK(plan.alloc[1][0] == 1.0);  // min{3, P_2}
  CHECK(plan.alloc[2][0] == 0.0);  // user K never hides
  CHECK(plan.active[0] == std::vector<int>{1, 2});
  CHECK(check_alignment(config, plan).feasible);
}

TEST_CASE("a zero-gain interferer allocates nothing") {
  const ChannelConfig config{3, {0.0, 2.0}, {100.0, 3.0, 8.0}};
  const LayerPlan plan = build_layer_plan(config);
  for (const double p : plan.alloc[0]) CHECK(p == 0.0);
  CHECK(plan.user_layers[0].empty());
}

TEST_CASE("unit gain occupies layers from the noise delimiter up") {
  const ChannelConfig config{3, {1.0, 1.0}, {16.0, 16.0, 16.0}};
  const LayerPlan plan = build_layer_plan(config);
  // Only candidates above 1 are a_k P_k = 16 and P_K = 16.
  REQUIRE(plan.delimiters == std::vector<double>{1, 16});
  CHECK(plan.active[1] == std::vector<int>{1, 2, 3});
  CHECK(plan.alloc[0][1] == 15.0);
  CHECK(plan.alloc[0][0] == 0.0);  // 1/a - 1 = 0 at unit gain
}

TEST_CASE("received spans that stop inside a layer leave it unoccupied") {
  // a_1 P_1 = 12 is a delimiter; user 1 cannot reach [12, 18].
  const ChannelConfig config{3, {4.0, 6.0}, {3.0, 3.0, 1.0}};
  const LayerPlan plan = build_layer_plan(config);
  REQUIRE(plan.delimiters == std::vector<double>{1, 4, 6, 12, 18});
  const int last = plan.M();
  CHECK(plan.intervals[last].floor == 12.0);
  const auto& top = plan.active[last];
  CHECK(std::find(top.begin(), top.end(), 1) == top.end());
  CHECK(std::find(top.begin(), top.end(), 2) != top.end());
}

TEST_CASE("random plans stay aligned, feasible, and at most 2K-1 layers") {
  Rng rng(derive_seed(20240811, 0x1a7e, 0));
  for (int trial = 0; trial < 2000; ++trial) {
    const int K = 3 + static_cast<int>(rng.uniform_int(3));
    const ChannelConfig config = random_config(rng, K);
    const LayerPlan plan = build_layer_plan(config);

    CHECK(plan.delimiters == oracle_delimiters(config));
    CHECK(plan.M() <= 2 * K - 1);
    CHECK(plan.delimiters.front() == 1.0);
    CHECK(std::is_sorted(plan.delimiters.begin(), plan.delimiters.end()));

    const AlignmentReport report = check_alignment(config, plan);
    CHECK(report.aligned);
    CHECK(report.feasible);

    // Deterministic rebuild.
    const LayerPlan again = build_layer_plan(config);
    CHECK(again.delimiters == plan.delimiters);
    CHECK(again.alloc == plan.alloc);
  }
}

TEST_CASE("alignment checker flags a corrupted plan") {
  LayerPlan plan = build_layer_plan(worked_config());
  plan.alloc[0][2] += 0.5;  // user 1 no longer fills layer 2 exactly
  const AlignmentReport report = check_alignment(worked_config(), plan);
  CHECK_FALSE(report.aligned);
  CHECK(report.max_violation == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(report.worst_user == 1);
  CHECK(report.worst_layer == 2);
}

TEST_CASE("budget checker flags overspending") {
  LayerPlan plan = build_layer_plan(worked_config());
  plan.alloc[1][0] = 5.0;  // user 2 now spends 6 > P_2 = 2
  const AlignmentReport report = check_alignment(worked_config(), plan);
  CHECK_FALSE(report.feasible);
  CHECK(report.max_budget_excess == doctest::Approx(4.0).epsilon(1e-12));
}
