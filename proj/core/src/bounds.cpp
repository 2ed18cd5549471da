#include "m2o/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "m2o/errors.hpp"

namespace m2o {

namespace {

double half_log2(double x) { return 0.5 * std::log2(x); }

}  // namespace

double f_of_K(int K) {
  if (K < 3) {
    throw KTooSmall("f(K) is defined for K >= 3, got " + std::to_string(K));
  }
  const double k = static_cast<double>(K);
  const double log2K = std::log2(k);
  return (2.0 * k - 1.0) * ((k - 1.0) / 2.0 + (k + 1.0) / 2.0 * log2K) +
         0.5 * log2K;
}

double lower_bound_raw(const ChannelConfig& config) {
  const int K = config.K;
  double sum = 0.0;
  for (const double P : config.powers) sum += std::max(0.0, half_log2(P));

  // Penalty: the strongest received interferer normalized by the weakest
  // gain. With no interference at all the scheme pays only f(K).
  double penalty = 0.0;
  bool any_gain = false;
  double best_received = 0.0;
  double min_gain = 0.0;
  for (int i = 0; i < K - 1; ++i) {
    const double a = config.gains[static_cast<std::size_t>(i)];
    const double received = a * config.powers[static_cast<std::size_t>(i)];
    if (i == 0 || received > best_received) best_received = received;
    if (i == 0 || a < min_gain) min_gain = a;
    if (a != 0.0) any_gain = true;
  }
  if (any_gain && best_received > 0.0) {
    penalty = std::max(0.0, half_log2(best_received / std::max(1.0, min_gain)));
  }
  return sum - penalty - f_of_K(K);
}

double lower_bound(const ChannelConfig& config) {
  return std::max(0.0, lower_bound_raw(config));
}

double upper_bound(const ChannelConfig& config) {
  const int K = config.K;
  double sum = 0.0;
  for (const double P : config.powers) sum += cap(P);
  double received = 0.0;
  for (int i = 0; i < K - 1; ++i) {
    received += config.gains[static_cast<std::size_t>(i)] *
                config.powers[static_cast<std::size_t>(i)];
  }
  const double c = max_gain_c(config);
  return sum - cap(received / ((K - 1) * c));
}

double gap_budget_case1(int K) {
  return K / 2.0 + std::log2(static_cast<double>(K - 1)) + f_of_K(K);
}

double gap_budget_case2(int K) { return K / 2.0 + f_of_K(K); }

BoundsReport gap_report(const ChannelConfig& config) {
  BoundsReport report;
  report.lower_raw = lower_bound_raw(config);
  report.lower = std::max(0.0, report.lower_raw);
  report.upper = upper_bound(config);
  report.fK = f_of_K(config.K);
  report.gap = report.upper - report.lower_raw;

  report.case1 = true;
  for (const double a : config.gains) {
    if (a >= 1.0) report.case1 = false;
  }
  report.case2 = true;
  for (std::size_t i = 1; i + 1 < config.powers.size(); ++i) {
    if (config.powers[i] != config.powers[0]) report.case2 = false;
  }
  for (std::size_t i = 1; i < config.gains.size(); ++i) {
    if (config.gains[i] != config.gains[0]) report.case2 = false;
  }

  if (report.case2) {
    report.gap_budget = gap_budget_case2(config.K);
  } else if (report.case1) {
    report.gap_budget = gap_budget_case1(config.K);
  }
  return report;
}

std::vector<LayerCaps> layer_rate_caps(const LayerPlan& plan) {
  const int M = plan.M();
  std::vector<LayerCaps> caps(static_cast<std::size_t>(M) + 1);
  for (int m = 1; m <= M; ++m) {
    const LayerInterval& layer = plan.intervals[static_cast<std::size_t>(m)];
    const double width = layer.width();
    caps[static_cast<std::size_t>(m)].r_K_cap =
        std::max(0.0, half_log2(width / (plan.K * layer.floor)));
    caps[static_cast<std::size_t>(m)].r_k_cap =
        std::max(0.0, half_log2(width / layer.floor));
  }
  return caps;
}

const char* layer_mode_name(LayerMode mode) {
  switch (mode) {
    case LayerMode::Idle: return "idle";
    case LayerMode::UserK: return "user_K";
    case LayerMode::Confidential: return "confidential";
  }
  return "unknown";
}

LayerContributions layer_sum_contributions(const ChannelConfig& config,
                                           const LayerPlan& plan,
                                           const std::vector<LayerCaps>& caps) {
  const int K = plan.K;
  const double log2K = std::log2(static_cast<double>(K));
  LayerContributions out;
  out.contribution.assign(static_cast<std::size_t>(plan.M()) + 1, 0.0);
  out.mode.assign(static_cast<std::size_t>(plan.M()) + 1, LayerMode::Idle);

  // Sentinel layer: secret rate of the users hiding below the noise floor.
  // Each such signal is received below receiver K's noise and still leaks
  // at most 1/2 log2 K in aggregate.
  double floor_rate = 0.0;
  bool any_hidden = false;
  for (const int user : plan.active[0]) {
    if (user == K) continue;
    const double a = config.gains[static_cast<std::size_t>(user - 1)];
    if (a > 0.0 && a < 1.0) {
      floor_rate += half_log2(1.0 / a);
      any_hidden = true;
    }
  }
  if (any_hidden) {
    out.contribution[0] = floor_rate - 0.5 * log2K;
    out.mode[0] = LayerMode::Confidential;
  }

  for (int m = 1; m <= plan.M(); ++m) {
    const double R = caps[static_cast<std::size_t>(m)].r_K_cap;
    int confidential = 0;
    bool user_K_active = false;
    for (const int user : plan.active[static_cast<std::size_t>(m)]) {
      if (user == K) {
        user_K_active = true;
      } else {
        ++confidential;
      }
    }
    // Option 1: confidential users fill the layer and sacrifice log2 K to
    // the aligned-sum side information. Option 2: hand the layer to user K
    // for ordinary (non-secret) rate. Take the better one.
    double best = 0.0;
    LayerMode mode = LayerMode::Idle;
    if (confidential > 0) {
      best = confidential * R - log2K;
      mode = LayerMode::Confidential;
    }
    if (user_K_active && (mode == LayerMode::Idle || R > best)) {
      best = R;
      mode = LayerMode::UserK;
    }
    out.contribution[static_cast<std::size_t>(m)] = best;
    out.mode[static_cast<std::size_t>(m)] = mode;
  }

  out.total = 0.0;
  for (const double c : out.contribution) out.total += c;
  return out;
}

DofEstimate dof_sweep(const ChannelConfig& base,
                      const std::vector<double>& powers) {
  if (powers.size() < 3) {
    throw DegenerateSweep("dof_sweep needs at least 3 points, got " +
                          std::to_string(powers.size()));
  }
  DofEstimate estimate;
  estimate.points.reserve(powers.size());
  double p_max = 0.0;
  for (const double P : powers) p_max = std::max(p_max, P);

  ChannelConfig config = base;
  for (const double P : powers) {
    config.powers.assign(static_cast<std::size_t>(config.K), P);
    DofPoint point;
    point.P = P;
    point.half_log2_P = half_log2(P);
    point.lower_raw = lower_bound_raw(config);
    point.lower = std::max(0.0, point.lower_raw);
    point.upper = upper_bound(config);
    estimate.points.push_back(point);
  }

  // Least-squares slope against 1/2 log2 P over the top decade. The raw
  // lower bound is fitted so that clamping cannot flatten the slope.
  const double cut = p_max / 10.0;
  double sx = 0, sxx = 0, sl = 0, su = 0, sxl = 0, sxu = 0;
  int n = 0;
  for (const DofPoint& point : estimate.points) {
    if (point.P < cut) continue;
    ++n;
    sx += point.half_log2_P;
    sxx += point.half_log2_P * point.half_log2_P;
    sl += point.lower_raw;
    su += point.upper;
    sxl += point.half_log2_P * point.lower_raw;
    sxu += point.half_log2_P * point.upper;
  }
  estimate.fit_points = n;
  const double denom = n * sxx - sx * sx;
  if (n < 2 || denom == 0.0) {
    throw DegenerateSweep("top decade holds fewer than 2 distinct points");
  }
  estimate.lower_slope = (n * sxl - sx * sl) / denom;
  estimate.upper_slope = (n * sxu - sx * su) / denom;
  return estimate;
}

}  // namespace m2o
