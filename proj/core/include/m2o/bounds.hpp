#pragma once

#include <optional>
#include <vector>

#include "m2o/channel.hpp"
#include "m2o/layering.hpp"

namespace m2o {

/* Secrecy sum-rate bounds and their per-layer accounting.
 *
 * lower_bound_raw evaluates the closed-form achievable secrecy sum rate
 *
 *   sum_k max{0, 1/2 log2 P_k}
 *     - max{0, 1/2 log2( a_I P_I / max{1, a_J} )}  - f(K)
 *
 * where I maximizes a_i P_i and J minimizes a_i over the interferers, and
 * f(K) = (2K-1) ((K-1)/2 + (K+1)/2 log2 K) + 1/2 log2 K is the constant
 * cost of the layered lattice scheme. The penalty term vanishes when all
 * gains are zero. upper_bound evaluates the converse
 *
 *   sum_i C(P_i) - C( sum_{i<K} a_i P_i / ((K-1) c) ),  c = max{1, a_i}.
 *
 * Both scale like (K-1) * 1/2 log2 P, so their gap is bounded by a constant
 * in two regimes: all gains below one (budget K/2 + log2(K-1) + f(K)) and
 * symmetric interferers (budget K/2 + f(K)).
 */

double f_of_K(int K);                          // throws KTooSmall for K < 3
double lower_bound_raw(const ChannelConfig&);  // may be negative
double lower_bound(const ChannelConfig&);      // max{0, lower_bound_raw}
double upper_bound(const ChannelConfig&);

struct BoundsReport {
  double lower_raw = 0;  // closed-form value before clamping
  double lower = 0;      // max{0, lower_raw}
  double upper = 0;
  double fK = 0;
  double gap = 0;        // upper - lower_raw
  bool case1 = false;    // all a_i < 1
  bool case2 = false;    // a_i and P_i identical across interferers
  std::optional<double> gap_budget;  // tightest applicable constant-gap budget
};

BoundsReport gap_report(const ChannelConfig& config);

// Constant-gap budgets for the two regimes with a proven budget.
double gap_budget_case1(int K);  // K/2 + log2(K-1) + f(K)
double gap_budget_case2(int K);  // K/2 + f(K)

/* Per-layer rate caps. Receiver K decodes the aligned lattice sum of layer
 * m against everything below it, which caps the common layer rate at
 * r_K = max{0, 1/2 log2( width(m) / (K q_{m-1}) )}; the intended receiver
 * k < K only fights its own lower layers, giving the looser
 * r_k = max{0, 1/2 log2( width(m) / q_{m-1} )}. The binding operating rate
 * R_m is r_K. Entry 0 corresponds to the sentinel layer and is zero. */
struct LayerCaps {
  double r_K_cap = 0;
  double r_k_cap = 0;
};

std::vector<LayerCaps> layer_rate_caps(const LayerPlan& plan);

enum class LayerMode {
  Idle,          // no occupants or nothing worth sending
  UserK,         // user K sends its own message at rate R_m
  Confidential,  // users 1..K-1 send secret codewords, user K jams if present
};

const char* layer_mode_name(LayerMode mode);

/* Per-layer secrecy contributions. A confidential layer m >= 1 is worth
 * |U'_m| R_m - log2 K (the aligned sum leaks at most log2 K bits per layer);
 * handing the layer to user K is worth R_m of ordinary rate. Each layer
 * picks the better option. The sentinel layer carries the below-noise-floor
 * secret rate sum_{k in U'_0} 1/2 log2(1/a_k) - 1/2 log2 K. */
struct LayerContributions {
  std::vector<double> contribution;  // size M+1, entry 0 is the sentinel layer
  std::vector<LayerMode> mode;       // size M+1
  double total = 0;
};

LayerContributions layer_sum_contributions(const ChannelConfig& config,
                                           const LayerPlan& plan,
                                           const std::vector<LayerCaps>& caps);

/* Degrees-of-freedom sweep: evaluates both bounds on configs with all
 * powers set to each entry of `powers` and fits a least-squares slope
 * against 1/2 log2 P over the top decade (P >= max/10). Throws
 * DegenerateSweep when fewer than 3 sweep points are given. */
struct DofPoint {
  double P = 0;
  double half_log2_P = 0;
  double lower_raw = 0;
  double lower = 0;
  double upper = 0;
};

struct DofEstimate {
  double lower_slope = 0;
  double upper_slope = 0;
  int fit_points = 0;  // points inside the top decade
  std::vector<DofPoint> points;
};

DofEstimate dof_sweep(const ChannelConfig& base,
                      const std::vector<double>& powers);

}  // namespace m2o
