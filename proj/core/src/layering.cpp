#include "m2o/layering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace m2o {

std::vector<LayerInterval> compute_delimiters(const ChannelConfig& config) {
  const int K = config.K;
  // Candidates above the noise level: received edges of every interferer,
  // user K's own power, and the constant 1 as the lowest delimiter.
  std::set<double> delims;
  delims.insert(1.0);
  for (int i = 0; i < K - 1; ++i) {
    const double a = config.gains[static_cast<std::size_t>(i)];
    const double received = a * config.powers[static_cast<std::size_t>(i)];
    if (a > 1.0) delims.insert(a);
    if (received > 1.0) delims.insert(received);
  }
  if (config.powers[static_cast<std::size_t>(K - 1)] > 1.0) {
    delims.insert(config.powers[static_cast<std::size_t>(K - 1)]);
  }

  std::vector<LayerInterval> intervals;
  intervals.reserve(delims.size());
  LayerInterval sentinel;
  sentinel.index = 0;
  sentinel.floor = -std::numeric_limits<double>::infinity();
  sentinel.ceiling = 1.0;
  intervals.push_back(sentinel);

  double prev = 0.0;
  int index = 0;
  for (const double d : delims) {
    if (index > 0) {
      LayerInterval layer;
      layer.index = index;
      layer.floor = prev;
      layer.ceiling = d;
      intervals.push_back(layer);
    }
    prev = d;
    ++index;
  }
  return intervals;
}

LayerPlan allocate_power(const ChannelConfig& config,
                         const std::vector<LayerInterval>& intervals) {
  const int K = config.K;
  const int M = static_cast<int>(intervals.size()) - 1;

  LayerPlan plan;
  plan.K = K;
  plan.intervals = intervals;
  plan.delimiters.reserve(static_cast<std::size_t>(M) + 1);
  plan.delimiters.push_back(intervals[0].ceiling);
  for (int m = 1; m <= M; ++m) {
    plan.delimiters.push_back(intervals[static_cast<std::size_t>(m)].ceiling);
  }
  plan.alloc.assign(static_cast<std::size_t>(K),
                    std::vector<double>(static_cast<std::size_t>(M) + 1, 0.0));
  plan.active.assign(static_cast<std::size_t>(M) + 1, {});
  plan.user_layers.assign(static_cast<std::size_t>(K), {});

  for (int k = 0; k < K - 1; ++k) {
    const double a = config.gains[static_cast<std::size_t>(k)];
    const double P = config.powers[static_cast<std::size_t>(k)];
    // Below the noise floor a user can hide at most 1/a_k - 1 of power,
    // and never more than its own budget; a silent link (a_k = 0) needs
    // no hiding and gets nothing here.
    plan.alloc[static_cast<std::size_t>(k)][0] =
        (a > 0.0) ? std::min(std::max(1.0 / a - 1.0, 0.0), P) : 0.0;
    if (a <= 0.0) continue;
    for (int m = 1; m <= M; ++m) {
      const LayerInterval& layer = intervals[static_cast<std::size_t>(m)];
      if (a * P >= layer.ceiling && layer.floor >= a) {
        plan.alloc[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] =
            layer.width() / a;
      }
    }
  }
  // User K fills every layer its power reaches; it never hides below the
  // noise floor of its own receiver.
  for (int m = 1; m <= M; ++m) {
    const LayerInterval& layer = intervals[static_cast<std::size_t>(m)];
    if (config.powers[static_cast<std::size_t>(K - 1)] >= layer.ceiling) {
      plan.alloc[static_cast<std::size_t>(K - 1)][static_cast<std::size_t>(m)] =
          layer.width();
    }
  }

  for (int m = 0; m <= M; ++m) {
    for (int k = 0; k < K; ++k) {
      if (plan.alloc[static_cast<std::size_t>(k)][static_cast<std::size_t>(m)] > 0.0) {
        plan.active[static_cast<std::size_t>(m)].push_back(k + 1);
        plan.user_layers[static_cast<std::size_t>(k)].push_back(m);
      }
    }
  }
  return plan;
}

LayerPlan build_layer_plan(const ChannelConfig& config) {
  return allocate_power(config, compute_delimiters(config));
}

AlignmentReport check_alignment(const ChannelConfig& config,
                                const LayerPlan& plan, double tol) {
  AlignmentReport report;
  report.worst_layer = -1;

  const int K = plan.K;
  const int M = plan.M();
  for (int m = 1; m <= M; ++m) {
    const double width = plan.intervals[static_cast<std::size_t>(m)].width();
    for (const int user : plan.active[static_cast<std::size_t>(m)]) {
      const double gain =
          (user == K) ? 1.0 : config.gains[static_cast<std::size_t>(user - 1)];
      const double received =
          gain * plan.alloc[static_cast<std::size_t>(user - 1)][static_cast<std::size_t>(m)];
      const double violation = std::fabs(received - width);
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_user = user;
        report.worst_layer = m;
      }
    }
  }

  for (int k = 0; k < K; ++k) {
    double total = 0.0;
    for (const double p : plan.alloc[static_cast<std::size_t>(k)]) total += p;
    const double excess = total - config.powers[static_cast<std::size_t>(k)];
    if (excess > report.max_budget_excess) {
      report.max_budget_excess = excess;
      if (excess > tol && report.worst_user == 0) report.worst_user = k + 1;
    }
  }

  report.aligned = report.max_violation <= tol;
  report.feasible = report.max_budget_excess <= tol;
  return report;
}

}  // namespace m2o
