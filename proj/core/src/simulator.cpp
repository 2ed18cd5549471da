#include "m2o/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "m2o/errors.hpp"

namespace m2o {

namespace {

// Centered representative of x modulo `period`, in (-period/2, period/2].
double centered_mod(double x, double period) {
  double r = x - period * std::ceil(x / period - 0.5);
  if (r <= -period / 2.0) r += period;
  if (r > period / 2.0) r -= period;
  return r;
}

// Fixed dither grid: half-integers for even q, integers for odd q. Either
// way the dithered alphabet is the symmetric q-point PAM set, so the
// per-dimension second moment of a dithered codeword is exactly
// (q^2 - 1) / 12 for every dither on the grid.
std::vector<double> draw_dither(const NestedLatticePair& pair, Rng& rng) {
  std::vector<double> d(static_cast<std::size_t>(pair.dim()));
  const std::int64_t q = pair.q();
  for (auto& coord : d) {
    const std::int64_t step = static_cast<std::int64_t>(
        rng.uniform_int(static_cast<std::uint64_t>(q)));
    if (q % 2 == 0) {
      coord = -static_cast<double>(q) / 2.0 + 0.5 + static_cast<double>(step);
    } else {
      coord = static_cast<double>(pair.coord_min() + step);
    }
  }
  return d;
}

// Uniform codeword, coordinates independent.
std::vector<std::int64_t> draw_codeword(const NestedLatticePair& pair,
                                        Rng& rng) {
  std::vector<std::int64_t> t(static_cast<std::size_t>(pair.dim()));
  for (auto& coord : t) {
    coord = pair.coord_min() +
            static_cast<std::int64_t>(
                rng.uniform_int(static_cast<std::uint64_t>(pair.q())));
  }
  return t;
}

std::int64_t layer_q_for_cap(double cap_bits, double margin) {
  const double budget = cap_bits - margin;
  if (budget < 1.0) return 1;  // a whole bit per dimension or nothing
  return static_cast<std::int64_t>(std::floor(std::pow(2.0, budget)));
}

double scale_for_power(std::int64_t q, double power) {
  const double qd = static_cast<double>(q);
  return std::sqrt(12.0 * power / (qd * qd - 1.0));
}

}  // namespace

SimPlan build_sim_plan(const ChannelConfig& config, double margin, int dim,
                       std::uint64_t seed) {
  require_valid(config);
  if (margin < 0.0) {
    throw std::invalid_argument("margin must be >= 0 bits");
  }
  if (dim < 1 || dim > 4) {
    throw std::invalid_argument("lattice dimension must be in [1, 4]");
  }

  SimPlan plan;
  plan.config = config;
  plan.layers = build_layer_plan(config);
  plan.caps = layer_rate_caps(plan.layers);
  plan.margin = margin;
  plan.dim = dim;
  plan.seed = seed;
  const LayerContributions modes =
      layer_sum_contributions(config, plan.layers, plan.caps);

  const int K = config.K;
  for (int m = 1; m <= plan.layers.M(); ++m) {
    const LayerInterval& interval =
        plan.layers.intervals[static_cast<std::size_t>(m)];
    CodedLayer layer;
    layer.layer = m;
    layer.width = interval.width();
    layer.r_K_cap = plan.caps[static_cast<std::size_t>(m)].r_K_cap;
    layer.r_k_cap = plan.caps[static_cast<std::size_t>(m)].r_k_cap;
    layer.mode = modes.mode[static_cast<std::size_t>(m)];
    layer.users = plan.layers.active[static_cast<std::size_t>(m)];
    layer.q = layer.users.empty() ? 1 : layer_q_for_cap(layer.r_K_cap, margin);
    if (layer.coded()) {
      layer.rate = std::log2(static_cast<double>(layer.q));
      layer.common_scale = scale_for_power(layer.q, layer.width);
      const NestedLatticePair pair(dim, layer.q);
      for (const int user : layer.users) {
        const double gain =
            (user == K) ? 1.0
                        : config.gains[static_cast<std::size_t>(user - 1)];
        layer.tx_scale.push_back(layer.common_scale / std::sqrt(gain));
        Rng rng(derive_seed(seed, rng_domain::kDither,
                            static_cast<std::uint64_t>(m) * 64u +
                                static_cast<std::uint64_t>(user)));
        layer.dither.push_back(draw_dither(pair, rng));
      }
    }
    plan.finite_layers.push_back(std::move(layer));
  }

  // Noise-floor codes: each hidden interferer runs a private point-to-point
  // code below receiver K's noise level, capped by its own receiver at
  // 1/2 log2 P_{k,0}.
  for (const int user : plan.layers.active[0]) {
    if (user == K) continue;
    const double power =
        plan.layers.alloc[static_cast<std::size_t>(user - 1)][0];
    CodedLayer layer;
    layer.layer = 0;
    layer.width = power;
    layer.r_k_cap = std::max(0.0, 0.5 * std::log2(power));
    layer.mode = LayerMode::Confidential;
    layer.users = {user};
    layer.q = layer_q_for_cap(layer.r_k_cap, margin);
    if (layer.coded()) {
      layer.rate = std::log2(static_cast<double>(layer.q));
      layer.common_scale = scale_for_power(layer.q, power);
      layer.tx_scale.push_back(layer.common_scale);
      const NestedLatticePair pair(dim, layer.q);
      Rng rng(derive_seed(seed, rng_domain::kDither,
                          static_cast<std::uint64_t>(user)));
      layer.dither.push_back(draw_dither(pair, rng));
    }
    plan.floor_codes.push_back(std::move(layer));
  }
  return plan;
}

namespace {

/* Per-trial draw of every active codeword in the plan. Confidential layers
 * randomize every occupant (user K's entry is a jamming word); user-K
 * layers randomize only user K, the others send the all-zero word. */
struct TrialWords {
  // finite_words[i][u] is occupant u's codeword on finite layer i+1.
  std::vector<std::vector<std::vector<std::int64_t>>> finite_words;
  std::vector<std::vector<std::int64_t>> floor_words;  // parallel to floor_codes
};

TrialWords draw_trial_words(const SimPlan& plan, Rng& rng) {
  TrialWords words;
  const int K = plan.config.K;
  words.finite_words.resize(plan.finite_layers.size());
  for (std::size_t i = 0; i < plan.finite_layers.size(); ++i) {
    const CodedLayer& layer = plan.finite_layers[i];
    if (!layer.coded()) continue;
    const NestedLatticePair pair(plan.dim, layer.q);
    words.finite_words[i].resize(layer.users.size());
    for (std::size_t u = 0; u < layer.users.size(); ++u) {
      const bool randomized =
          layer.mode == LayerMode::Confidential || layer.users[u] == K;
      words.finite_words[i][u] =
          randomized
              ? draw_codeword(pair, rng)
              : std::vector<std::int64_t>(static_cast<std::size_t>(plan.dim), 0);
    }
  }
  words.floor_words.resize(plan.floor_codes.size());
  for (std::size_t i = 0; i < plan.floor_codes.size(); ++i) {
    const CodedLayer& code = plan.floor_codes[i];
    if (!code.coded()) continue;
    const NestedLatticePair pair(plan.dim, code.q);
    words.floor_words[i] = draw_codeword(pair, rng);
  }
  return words;
}

// Dithered alphabet value on a coded layer, per coordinate.
double dithered_coord(const CodedLayer& layer, std::int64_t t, double d) {
  return centered_mod(static_cast<double>(t) + d,
                      static_cast<double>(layer.q));
}

}  // namespace

ReceiverStats simulate_receiver_K(const SimPlan& plan, std::int64_t trials,
                                  std::uint64_t seed, GaussianNoiseSpec noise) {
  if (noise.variance < 0.0) {
    throw std::invalid_argument("noise variance must be >= 0");
  }
  const int N = plan.dim;
  const double sigma = std::sqrt(noise.variance);

  ReceiverStats stats;
  stats.user = 0;
  stats.trials = trials;

  // Decoded layers, top-down.
  std::vector<std::size_t> order;
  for (std::size_t i = plan.finite_layers.size(); i-- > 0;) {
    if (plan.finite_layers[i].coded()) order.push_back(i);
  }
  for (const std::size_t i : order) {
    const CodedLayer& layer = plan.finite_layers[i];
    LayerErrorStats row;
    row.layer = layer.layer;
    row.user = 0;
    row.q = layer.q;
    row.rate = layer.rate;
    row.trials = trials;
    stats.layers.push_back(row);
  }

  Rng rng(derive_seed(seed, rng_domain::kReceiverK, 0));
  std::vector<double> noise_vec(static_cast<std::size_t>(N));

  for (std::int64_t trial = 0; trial < trials; ++trial) {
    const TrialWords words = draw_trial_words(plan, rng);

    // Received aligned contribution of each coded finite layer. Occupants
    // of a layer land at exactly common_scale times their dithered word,
    // so the layer sum is assembled at the common scale directly.
    std::vector<std::vector<double>> layer_rx(plan.finite_layers.size());
    std::vector<std::vector<std::int64_t>> group_sum(plan.finite_layers.size());
    for (std::size_t i = 0; i < plan.finite_layers.size(); ++i) {
      const CodedLayer& layer = plan.finite_layers[i];
      if (!layer.coded()) continue;
      const NestedLatticePair pair(N, layer.q);
      std::vector<double> rx(static_cast<std::size_t>(N), 0.0);
      std::vector<std::int64_t> sum(static_cast<std::size_t>(N), 0);
      for (std::size_t u = 0; u < layer.users.size(); ++u) {
        const auto& t = words.finite_words[i][u];
        for (int j = 0; j < N; ++j) {
          rx[static_cast<std::size_t>(j)] +=
              layer.common_scale *
              dithered_coord(layer, t[static_cast<std::size_t>(j)],
                             layer.dither[u][static_cast<std::size_t>(j)]);
          sum[static_cast<std::size_t>(j)] += t[static_cast<std::size_t>(j)];
        }
      }
      layer_rx[i] = std::move(rx);
      group_sum[i] = pair.mod_coarse(sum);
    }

    // Noise-floor residue seen by receiver K under every finite layer.
    std::vector<double> base(static_cast<std::size_t>(N), 0.0);
    for (std::size_t i = 0; i < plan.floor_codes.size(); ++i) {
      const CodedLayer& code = plan.floor_codes[i];
      if (!code.coded()) continue;
      const double gain =
          plan.config.gains[static_cast<std::size_t>(code.users[0] - 1)];
      for (int j = 0; j < N; ++j) {
        base[static_cast<std::size_t>(j)] +=
            std::sqrt(gain) * code.tx_scale[0] *
            dithered_coord(code, words.floor_words[i][static_cast<std::size_t>(j)],
                           code.dither[0][static_cast<std::size_t>(j)]);
      }
    }
    for (int j = 0; j < N; ++j) {
      noise_vec[static_cast<std::size_t>(j)] = sigma > 0.0 ? rng.gaussian(sigma) : 0.0;
    }

    // Prefix sums from the bottom: stack_below[i] = base + noise + all
    // coded layers strictly below finite layer i+1.
    std::vector<std::vector<double>> stack_below(plan.finite_layers.size());
    std::vector<double> running(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
      running[static_cast<std::size_t>(j)] =
          base[static_cast<std::size_t>(j)] + noise_vec[static_cast<std::size_t>(j)];
    }
    for (std::size_t i = 0; i < plan.finite_layers.size(); ++i) {
      stack_below[i] = running;
      if (!plan.finite_layers[i].coded()) continue;
      for (int j = 0; j < N; ++j) {
        running[static_cast<std::size_t>(j)] += layer_rx[i][static_cast<std::size_t>(j)];
      }
    }

    bool poisoned = false;
    bool any_error = false;
    for (std::size_t oi = 0; oi < order.size(); ++oi) {
      const std::size_t i = order[oi];
      const CodedLayer& layer = plan.finite_layers[i];
      LayerErrorStats& row = stats.layers[oi];
      if (poisoned) {
        ++row.errors;
        any_error = true;
        continue;
      }
      const NestedLatticePair pair(N, layer.q);
      const double period = layer.common_scale * static_cast<double>(layer.q);
      double dither_sum_scaled = 0.0;  // reused per coordinate below
      bool wrong = false;
      for (int j = 0; j < N; ++j) {
        dither_sum_scaled = 0.0;
        for (std::size_t u = 0; u < layer.users.size(); ++u) {
          dither_sum_scaled += layer.dither[u][static_cast<std::size_t>(j)];
        }
        const double y = stack_below[i][static_cast<std::size_t>(j)] +
                         layer_rx[i][static_cast<std::size_t>(j)];
        const double residue = centered_mod(
            y - layer.common_scale * dither_sum_scaled, period);
        const double u_val = residue / layer.common_scale;
        // Round to the fine lattice, then reduce: the codebook point q/2
        // sits on the region boundary, so its decision cell wraps around
        // and clamping would misread half of it.
        const std::int64_t decoded = pair.mod_coord(
            static_cast<std::int64_t>(std::floor(u_val + 0.5)));
        if (decoded != group_sum[i][static_cast<std::size_t>(j)]) wrong = true;
      }
      if (wrong) {
        ++row.errors;
        any_error = true;
        poisoned = true;
        continue;
      }
      // Wrap check before descending: the stack below plus noise must sit
      // inside this layer's scaled region or the subtraction is corrupted.
      bool wrapped = false;
      for (int j = 0; j < N; ++j) {
        const double low = stack_below[i][static_cast<std::size_t>(j)];
        if (low > period / 2.0 || low <= -period / 2.0) wrapped = true;
      }
      if (wrapped) {
        ++row.wraps;
        poisoned = true;  // current layer decoded, everything below is lost
      }
    }
    if (any_error) ++stats.block_errors;
  }
  return stats;
}

ReceiverStats simulate_receiver_k(const SimPlan& plan, int user,
                                  std::int64_t trials, std::uint64_t seed,
                                  GaussianNoiseSpec noise) {
  const int K = plan.config.K;
  if (user < 1 || user >= K) {
    throw std::invalid_argument("simulate_receiver_k: user must be in [1, K-1]");
  }
  if (noise.variance < 0.0) {
    throw std::invalid_argument("noise variance must be >= 0");
  }
  if (plan.layers.user_layers[static_cast<std::size_t>(user - 1)].empty()) {
    throw UserInactive("user " + std::to_string(user) +
                       " occupies no layer under this config");
  }
  const int N = plan.dim;
  const double sigma = std::sqrt(noise.variance);

  // The user's own stack, bottom-up: the floor code if coded, then its
  // coded finite layers. Confidential layers carry fresh information each
  // trial; layers handed to user K carry the known all-zero word, which
  // the receiver subtracts without decoding.
  struct OwnLayer {
    const CodedLayer* layer;
    std::size_t occupant;  // index of `user` in layer->users
    bool informative;      // carries a random own word
  };
  std::vector<OwnLayer> stack;
  for (std::size_t i = 0; i < plan.floor_codes.size(); ++i) {
    if (plan.floor_codes[i].users[0] == user && plan.floor_codes[i].coded()) {
      stack.push_back({&plan.floor_codes[i], 0, true});
    }
  }
  for (std::size_t i = 0; i < plan.finite_layers.size(); ++i) {
    const CodedLayer& layer = plan.finite_layers[i];
    if (!layer.coded()) continue;
    const auto it = std::find(layer.users.begin(), layer.users.end(), user);
    if (it == layer.users.end()) continue;
    const std::size_t occupant =
        static_cast<std::size_t>(it - layer.users.begin());
    stack.push_back({&layer, occupant, layer.mode == LayerMode::Confidential});
  }

  ReceiverStats stats;
  stats.user = user;
  stats.trials = trials;
  for (std::size_t s = stack.size(); s-- > 0;) {
    if (!stack[s].informative) continue;
    LayerErrorStats row;
    row.layer = stack[s].layer->layer;
    row.user = user;
    row.q = stack[s].layer->q;
    row.rate = stack[s].layer->rate;
    row.trials = trials;
    stats.layers.push_back(row);
  }

  Rng rng(derive_seed(seed, rng_domain::kReceiverUser,
                      static_cast<std::uint64_t>(user)));

  for (std::int64_t trial = 0; trial < trials; ++trial) {
    // Draw own words and assemble per-layer transmit components.
    std::vector<std::vector<std::int64_t>> own_words(stack.size());
    std::vector<std::vector<double>> own_tx(stack.size());
    for (std::size_t s = 0; s < stack.size(); ++s) {
      const CodedLayer& layer = *stack[s].layer;
      const NestedLatticePair pair(N, layer.q);
      own_words[s] =
          stack[s].informative
              ? draw_codeword(pair, rng)
              : std::vector<std::int64_t>(static_cast<std::size_t>(N), 0);
      own_tx[s].resize(static_cast<std::size_t>(N));
      for (int j = 0; j < N; ++j) {
        own_tx[s][static_cast<std::size_t>(j)] =
            layer.tx_scale[stack[s].occupant] *
            dithered_coord(layer, own_words[s][static_cast<std::size_t>(j)],
                           layer.dither[stack[s].occupant][static_cast<std::size_t>(j)]);
      }
    }
    // Prefix sums from the bottom of the own stack.
    std::vector<std::vector<double>> below(stack.size());
    std::vector<double> running(static_cast<std::size_t>(N), 0.0);
    for (int j = 0; j < N; ++j) {
      running[static_cast<std::size_t>(j)] =
          sigma > 0.0 ? rng.gaussian(sigma) : 0.0;
    }
    for (std::size_t s = 0; s < stack.size(); ++s) {
      below[s] = running;
      for (int j = 0; j < N; ++j) {
        running[static_cast<std::size_t>(j)] += own_tx[s][static_cast<std::size_t>(j)];
      }
    }

    bool poisoned = false;
    bool any_error = false;
    std::size_t row_index = 0;
    for (std::size_t s = stack.size(); s-- > 0;) {
      const CodedLayer& layer = *stack[s].layer;
      const double own_scale = layer.tx_scale[stack[s].occupant];
      const double period = own_scale * static_cast<double>(layer.q);
      if (stack[s].informative) {
        LayerErrorStats& row = stats.layers[row_index++];
        if (poisoned) {
          ++row.errors;
          any_error = true;
          continue;
        }
        const NestedLatticePair pair(N, layer.q);
        bool wrong = false;
        for (int j = 0; j < N; ++j) {
          const double y = below[s][static_cast<std::size_t>(j)] +
                           own_tx[s][static_cast<std::size_t>(j)];
          const double residue = centered_mod(
              y - own_scale *
                      layer.dither[stack[s].occupant][static_cast<std::size_t>(j)],
              period);
          const double u_val = residue / own_scale;
          const std::int64_t decoded = pair.mod_coord(
              static_cast<std::int64_t>(std::floor(u_val + 0.5)));
          if (decoded != own_words[s][static_cast<std::size_t>(j)]) wrong = true;
        }
        if (wrong) {
          ++row.errors;
          any_error = true;
          poisoned = true;
          continue;
        }
      } else if (poisoned) {
        continue;
      }
      // Wrap check before descending past this layer.
      bool wrapped = false;
      for (int j = 0; j < N; ++j) {
        const double low = below[s][static_cast<std::size_t>(j)];
        if (low > period / 2.0 || low <= -period / 2.0) wrapped = true;
      }
      if (wrapped) {
        if (stack[s].informative) ++stats.layers[row_index - 1].wraps;
        poisoned = true;
      }
    }
    if (any_error) ++stats.block_errors;
  }
  return stats;
}

namespace {

void merge_stats(ReceiverStats& into, const ReceiverStats& shard) {
  into.trials += shard.trials;
  into.block_errors += shard.block_errors;
  if (into.layers.empty()) {
    into.layers = shard.layers;
    return;
  }
  for (std::size_t i = 0; i < into.layers.size(); ++i) {
    into.layers[i].errors += shard.layers[i].errors;
    into.layers[i].wraps += shard.layers[i].wraps;
    into.layers[i].trials += shard.layers[i].trials;
  }
}

}  // namespace

SimResult end_to_end_report(const ChannelConfig& config, double margin,
                            std::int64_t trials, std::uint64_t seed, int shards,
                            int dim, GaussianNoiseSpec noise) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (shards < 1) throw std::invalid_argument("shards must be >= 1");
  const SimPlan plan = build_sim_plan(config, margin, dim, seed);

  SimResult result;
  result.margin = margin;
  result.dim = dim;
  result.trials = trials;
  result.seed = seed;
  result.shards = shards;
  result.noise_variance = noise.variance;
  result.receiver_K.user = 0;

  // Deterministic shard split: the first trials % shards substreams run
  // one extra trial.
  std::vector<std::int64_t> shard_trials(static_cast<std::size_t>(shards),
                                         trials / shards);
  for (int w = 0; w < trials % shards; ++w) {
    ++shard_trials[static_cast<std::size_t>(w)];
  }

  for (int w = 0; w < shards; ++w) {
    if (shard_trials[static_cast<std::size_t>(w)] == 0) continue;
    const ReceiverStats shard = simulate_receiver_K(
        plan, shard_trials[static_cast<std::size_t>(w)],
        derive_seed(seed, rng_domain::kTrial, static_cast<std::uint64_t>(w)),
        noise);
    merge_stats(result.receiver_K, shard);
  }

  for (int user = 1; user < config.K; ++user) {
    if (plan.layers.user_layers[static_cast<std::size_t>(user - 1)].empty()) {
      continue;
    }
    ReceiverStats merged;
    merged.user = user;
    for (int w = 0; w < shards; ++w) {
      if (shard_trials[static_cast<std::size_t>(w)] == 0) continue;
      const ReceiverStats shard = simulate_receiver_k(
          plan, user, shard_trials[static_cast<std::size_t>(w)],
          derive_seed(seed, rng_domain::kTrial,
                      (static_cast<std::uint64_t>(user) << 32) |
                          static_cast<std::uint64_t>(w)),
          noise);
      merge_stats(merged, shard);
    }
    result.receivers.push_back(std::move(merged));
  }

  // Exact per-user mean transmit power: every coded layer contributes its
  // alphabet second moment times tx_scale^2, which the construction pins
  // to exactly P_{k,m}; empirical averaging would only add sampling noise
  // around these values, so the accounting reports the exact means.
  for (int user = 1; user <= config.K; ++user) {
    UserPower power;
    power.user = user;
    power.budget = config.powers[static_cast<std::size_t>(user - 1)];
    double mean = 0.0;
    for (const CodedLayer& layer : plan.finite_layers) {
      if (!layer.coded()) continue;
      for (std::size_t u = 0; u < layer.users.size(); ++u) {
        if (layer.users[u] != user) continue;
        const double qd = static_cast<double>(layer.q);
        mean += layer.tx_scale[u] * layer.tx_scale[u] * (qd * qd - 1.0) / 12.0;
      }
    }
    for (const CodedLayer& code : plan.floor_codes) {
      if (!code.coded() || code.users[0] != user) continue;
      const double qd = static_cast<double>(code.q);
      mean += code.tx_scale[0] * code.tx_scale[0] * (qd * qd - 1.0) / 12.0;
    }
    power.mean = mean;
    result.power.push_back(power);
  }
  return result;
}

SingleLayerChannel make_single_layer(const NestedLatticePair& pair,
                                     double power, std::uint64_t seed) {
  if (!(power > 0.0)) {
    throw std::invalid_argument("single-layer power must be > 0");
  }
  SingleLayerChannel channel{pair, power, scale_for_power(pair.q(), power), {}};
  Rng rng(derive_seed(seed, rng_domain::kDither, 0));
  channel.dither = draw_dither(pair, rng);
  return channel;
}

bool mod_channel_decode_trial(const SingleLayerChannel& channel,
                              double interference_power, double noise_variance,
                              Rng& rng) {
  if (interference_power < 0.0 || noise_variance < 0.0) {
    throw std::invalid_argument("interference and noise powers must be >= 0");
  }
  const NestedLatticePair& pair = channel.pair;
  const int N = pair.dim();
  const double period = channel.scale * static_cast<double>(pair.q());
  const double side = std::sqrt(12.0 * interference_power);
  const double sigma = std::sqrt(noise_variance);

  const std::vector<std::int64_t> t = draw_codeword(pair, rng);
  bool correct = true;
  for (int j = 0; j < N; ++j) {
    const double x =
        channel.scale *
        centered_mod(static_cast<double>(t[static_cast<std::size_t>(j)]) +
                         channel.dither[static_cast<std::size_t>(j)],
                     static_cast<double>(pair.q()));
    double y = x;
    if (side > 0.0) y += side * (rng.uniform() - 0.5);
    if (sigma > 0.0) y += rng.gaussian(sigma);
    const double wrapped = centered_mod(y, period);
    const double residue = centered_mod(
        wrapped - channel.scale * channel.dither[static_cast<std::size_t>(j)],
        period);
    const double u_val = residue / channel.scale;
    const std::int64_t decoded = pair.mod_coord(
        static_cast<std::int64_t>(std::floor(u_val + 0.5)));
    if (decoded != t[static_cast<std::size_t>(j)]) correct = false;
  }
  return correct;
}

double mod_channel_error_rate(const SingleLayerChannel& channel,
                              double interference_power, double noise_variance,
                              std::int64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  Rng rng(derive_seed(seed, rng_domain::kTrial, 0));
  std::int64_t errors = 0;
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    if (!mod_channel_decode_trial(channel, interference_power, noise_variance,
                                  rng)) {
      ++errors;
    }
  }
  return static_cast<double>(errors) / static_cast<double>(trials);
}

}  // namespace m2o
