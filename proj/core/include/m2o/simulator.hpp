#pragma once

#include <cstdint>
#include <vector>

#include "m2o/bounds.hpp"
#include "m2o/channel.hpp"
#include "m2o/lattice.hpp"
#include "m2o/layering.hpp"

namespace m2o {

/* Monte Carlo simulation of the layered lattice scheme at desk scale.
 *
 * Each finite layer whose binding rate cap clears the safety margin by at
 * least one bit carries a nested pair with q = floor(2^(r_K_cap - margin)),
 * shared by every occupant of the layer; layers that cannot fit a whole
 * bit stay silent. Dithers are fixed per (layer, user), drawn from the
 * half-integer grid for even q and the integer grid for odd q so that the
 * dithered alphabet is the symmetric q-point PAM set: every user's
 * transmit power is then exactly P_{k,m} and the received codewords of a
 * layer align exactly under the common scale sqrt(12 width / (q^2 - 1)).
 *
 * Receiver K strips layers from the top: reduce modulo the layer's scaled
 * coarse lattice after dither removal, decode the group sum by nearest
 * codebook point, subtract, check that the remaining stack plus noise did
 * not wrap out of the region, descend. Receiver k < K runs the same loop
 * over its own layers only, plus its below-noise-floor layer 0 code when
 * one exists. A wrong decode or a wrap poisons everything below it; such
 * layers count as errored (first-error semantics).
 */

struct CodedLayer {
  int layer = 0;        // interval index; 0 is the per-user noise-floor code
  std::int64_t q = 1;   // 1 means the layer is silent
  double rate = 0;      // log2 q per dimension, 0 when silent
  double width = 0;     // layer width, or P_{k,0} for a layer-0 entry
  double r_K_cap = 0;
  double r_k_cap = 0;
  double common_scale = 0;            // receiver-K amplitude of one codeword unit
  LayerMode mode = LayerMode::Idle;
  std::vector<int> users;             // 1-based occupants (layer 0: single user)
  std::vector<double> tx_scale;       // per occupant, common_scale / sqrt(a_k)
  std::vector<std::vector<double>> dither;  // per occupant, length dim

  bool coded() const { return q >= 2; }
};

struct SimPlan {
  ChannelConfig config;
  LayerPlan layers;
  std::vector<LayerCaps> caps;
  double margin = 0;
  int dim = 1;
  std::uint64_t seed = 0;
  std::vector<CodedLayer> finite_layers;  // index m-1 holds layer m
  std::vector<CodedLayer> floor_codes;    // layer-0 codes, one per hidden user
};

// Builds the full transmission plan. margin >= 0 bits, dim in [1, 4].
SimPlan build_sim_plan(const ChannelConfig& config, double margin, int dim,
                       std::uint64_t seed);

struct LayerErrorStats {
  int layer = 0;
  int user = 0;  // 0 for receiver-K rows, else the 1-based user
  std::int64_t q = 1;
  double rate = 0;
  std::int64_t errors = 0;
  std::int64_t wraps = 0;
  std::int64_t trials = 0;
};

struct ReceiverStats {
  int user = 0;  // 0 means receiver K
  std::int64_t trials = 0;
  std::int64_t block_errors = 0;
  std::vector<LayerErrorStats> layers;  // coded layers, top-down processing order
  double block_error_rate() const {
    return trials ? static_cast<double>(block_errors) / static_cast<double>(trials) : 0.0;
  }
};

// Sequential decoding of the aligned sums at receiver K.
ReceiverStats simulate_receiver_K(const SimPlan& plan, std::int64_t trials,
                                  std::uint64_t seed,
                                  GaussianNoiseSpec noise = {});

// Sequential decoding of user k's own stack at receiver k (1-based, k < K).
// Throws UserInactive when the user occupies no coded layer.
ReceiverStats simulate_receiver_k(const SimPlan& plan, int user,
                                  std::int64_t trials, std::uint64_t seed,
                                  GaussianNoiseSpec noise = {});

struct UserPower {
  int user = 0;       // 1-based
  double budget = 0;  // P_k
  double mean = 0;    // per-dimension transmit power, exact under the dither grid
};

struct SimResult {
  double margin = 0;
  int dim = 1;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  int shards = 1;
  double noise_variance = 1.0;
  ReceiverStats receiver_K;
  std::vector<ReceiverStats> receivers;  // active users 1..K-1 in id order
  std::vector<UserPower> power;
};

// Runs receiver K and every active confidential receiver, with trials
// split across `shards` deterministic substreams derived from (seed,
// receiver, shard). Identical arguments reproduce identical results.
SimResult end_to_end_report(const ChannelConfig& config, double margin,
                            std::int64_t trials, std::uint64_t seed,
                            int shards = 1, int dim = 1,
                            GaussianNoiseSpec noise = {});

/* Single modulo-lattice point-to-point channel, the building block the
 * per-layer decoding reduces to: Y = (x + U + Z) mod scaled coarse, U
 * uniform with the given per-dimension power, Z Gaussian. */
struct SingleLayerChannel {
  NestedLatticePair pair;
  double power = 0;     // per-dimension transmit power
  double scale = 0;     // sqrt(12 power / (q^2 - 1))
  std::vector<double> dither;
};

SingleLayerChannel make_single_layer(const NestedLatticePair& pair,
                                     double power, std::uint64_t seed);

// One transmission trial; true when the decoded word equals the sent word.
bool mod_channel_decode_trial(const SingleLayerChannel& channel,
                              double interference_power,
                              double noise_variance, Rng& rng);

// Error rate over `trials` independent trials from a derived stream.
double mod_channel_error_rate(const SingleLayerChannel& channel,
                              double interference_power,
                              double noise_variance, std::int64_t trials,
                              std::uint64_t seed);

}  // namespace m2o
