#pragma once

#include <vector>

#include "m2o/channel.hpp"

namespace m2o {

/* Power-domain layering.
 *
 * Received signal space at receiver K is cut into horizontal layers by a
 * delimiter list q_0 < q_1 < ... < q_M with q_0 = 1. Delimiter candidates
 * are the received interference edges a_k*P_k and a_k of every interferer,
 * user K's own power P_K, and the noise level 1; candidates at or below 1
 * are dropped because they fall inside the noise-floor layer. Layer m >= 1
 * is the interval [q_{m-1}, q_m]; layer 0 is the sentinel (-inf, 1] where
 * signals sit below the noise level at receiver K.
 *
 * Every user splits its power so that each occupied layer is filled exactly:
 * user k < K puts width(m)/a_k into layer m when its received span covers
 * the layer and the layer floor clears a_k, so the received power
 * a_k * P_{k,m} equals the layer width and all occupants of a layer arrive
 * at receiver K with identical power. User K fills layers directly. Layer 0
 * receives max{1/a_k - 1, 0}, the largest power an interferer can hide
 * below receiver K's noise floor.
 */

struct LayerInterval {
  int index = 0;      // 0 is the sentinel layer
  double floor = 0;   // -infinity for the sentinel
  double ceiling = 0;
  double width() const { return ceiling - floor; }
};

struct LayerPlan {
  int K = 0;
  std::vector<double> delimiters;            // q_0..q_M, ascending, q_0 = 1
  std::vector<LayerInterval> intervals;      // size M+1, index 0 is the sentinel
  std::vector<std::vector<double>> alloc;    // K rows, M+1 columns, P_{k,m}
  std::vector<std::vector<int>> active;      // per layer, 1-based ids of users with P_{k,m} > 0
  std::vector<std::vector<int>> user_layers; // per user, layer indices with P_{k,m} > 0 (B_k)

  int M() const { return static_cast<int>(delimiters.size()) - 1; }
};

// Builds the delimiter list and the layer intervals for a valid config.
std::vector<LayerInterval> compute_delimiters(const ChannelConfig& config);

// Fills the per-user, per-layer power matrix for the given intervals.
LayerPlan allocate_power(const ChannelConfig& config,
                         const std::vector<LayerInterval>& intervals);

// compute_delimiters followed by allocate_power.
LayerPlan build_layer_plan(const ChannelConfig& config);

struct AlignmentReport {
  bool aligned = false;        // every occupied layer is exactly filled
  bool feasible = false;       // every user stays within its power budget
  double max_violation = 0.0;  // worst |a_k * P_{k,m} - width(m)| over occupants
  double max_budget_excess = 0.0;  // worst sum_m P_{k,m} - P_k over users
  int worst_user = 0;          // 1-based, 0 if no violation
  int worst_layer = -1;
};

// Verifies the alignment identity a_k * P_{k,m} = width(m) for every
// occupant of every layer m >= 1 (a_K treated as 1) and the per-user
// budget sum_m P_{k,m} <= P_k, to tolerance tol.
AlignmentReport check_alignment(const ChannelConfig& config,
                                const LayerPlan& plan, double tol = 1e-9);

}  // namespace m2o
