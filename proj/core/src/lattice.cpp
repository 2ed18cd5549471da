#include "m2o/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "m2o/errors.hpp"

namespace m2o {

namespace {

// Checked power for the state guards; would overflow only far beyond them.
std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

double entropy_bits(const std::unordered_map<std::int64_t, std::int64_t>& counts,
                    std::int64_t total) {
  double h = 0.0;
  for (const auto& [key, count] : counts) {
    (void)key;
    const double p = static_cast<double>(count) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

NestedLatticePair::NestedLatticePair(int dim, std::int64_t q)
    : dim_(dim), q_(q) {
  if (dim < 1 || dim > 4) {
    throw std::invalid_argument("lattice dimension must be in [1, 4], got " +
                                std::to_string(dim));
  }
  if (q < 2) {
    throw std::invalid_argument("nesting ratio q must be >= 2, got " +
                                std::to_string(q));
  }
}

double NestedLatticePair::rate_per_dim() const {
  return std::log2(static_cast<double>(q_));
}

double NestedLatticePair::mod_coord(double x) const {
  const double q = static_cast<double>(q_);
  // ceil(x/q - 1/2) picks the coset shift that lands x in (-q/2, q/2];
  // the boundary -q/2 maps to +q/2.
  double r = x - q * std::ceil(x / q - 0.5);
  // Guard against rounding at the open edge for values many periods away.
  if (r <= -q / 2.0) r += q;
  if (r > q / 2.0) r -= q;
  return r;
}

std::int64_t NestedLatticePair::mod_coord(std::int64_t v) const {
  std::int64_t r = v % q_;
  if (r < 0) r += q_;       // nonnegative representative first
  if (2 * r > q_) r -= q_;  // then shift into (-q/2, q/2]
  return r;
}

std::vector<double> NestedLatticePair::mod_coarse(
    const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != dim_) {
    throw std::invalid_argument("mod_coarse: expected " + std::to_string(dim_) +
                                " coordinates, got " + std::to_string(x.size()));
  }
  std::vector<double> r(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) r[j] = mod_coord(x[j]);
  return r;
}

std::vector<std::int64_t> NestedLatticePair::mod_coarse(
    const std::vector<std::int64_t>& v) const {
  if (static_cast<int>(v.size()) != dim_) {
    throw std::invalid_argument("mod_coarse: expected " + std::to_string(dim_) +
                                " coordinates, got " + std::to_string(v.size()));
  }
  std::vector<std::int64_t> r(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) r[j] = mod_coord(v[j]);
  return r;
}

std::vector<std::int64_t> NestedLatticePair::nearest_codebook_point(
    const std::vector<double>& y) const {
  double states = 1.0;
  for (int j = 0; j < dim_; ++j) states *= static_cast<double>(q_);
  if (states > 1e6) {
    throw CodebookTooLarge("nearest-point search limited to q^N <= 1e6, got q=" +
                           std::to_string(q_) + " N=" + std::to_string(dim_));
  }
  if (static_cast<int>(y.size()) != dim_) {
    throw std::invalid_argument("nearest_codebook_point: dimension mismatch");
  }
  // Separable codebook, Euclidean metric: the argmin factors into
  // per-coordinate rounding clamped to the coordinate range.
  std::vector<std::int64_t> t(y.size());
  const double lo = static_cast<double>(coord_min());
  const double hi = static_cast<double>(coord_max());
  for (std::size_t j = 0; j < y.size(); ++j) {
    const double r = std::floor(y[j] + 0.5);  // ties round up
    t[j] = static_cast<std::int64_t>(std::clamp(r, lo, hi));
  }
  return t;
}

std::vector<std::int64_t> NestedLatticePair::codebook_point(
    std::int64_t index) const {
  std::vector<std::int64_t> t(static_cast<std::size_t>(dim_));
  for (int j = dim_ - 1; j >= 0; --j) {
    const std::int64_t digit = index % q_;
    index /= q_;
    t[static_cast<std::size_t>(j)] = coord_min() + digit;
  }
  return t;
}

std::int64_t NestedLatticePair::codebook_index(
    const std::vector<std::int64_t>& t) const {
  std::int64_t index = 0;
  for (int j = 0; j < dim_; ++j) {
    index = index * q_ + (t[static_cast<std::size_t>(j)] - coord_min());
  }
  return index;
}

DitheredWord encode(const NestedLatticePair& pair, const std::vector<double>& t,
                    const std::vector<double>& d) {
  if (static_cast<int>(t.size()) != pair.dim() ||
      static_cast<int>(d.size()) != pair.dim()) {
    throw std::invalid_argument("encode: dimension mismatch");
  }
  DitheredWord word;
  word.t.resize(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    const double rounded = std::nearbyint(t[j]);
    if (std::fabs(t[j] - rounded) > 1e-9) {
      throw PointNotInCodebook("encode: coordinate " + std::to_string(j) +
                               " is not a fine-lattice point: " +
                               std::to_string(t[j]));
    }
    word.t[j] = pair.mod_coord(static_cast<std::int64_t>(rounded));
  }
  word.d = d;
  word.x.resize(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) {
    word.x[j] = pair.mod_coord(static_cast<double>(word.t[j]) + d[j]);
  }
  return word;
}

std::vector<std::int64_t> decode_with_dither(const NestedLatticePair& pair,
                                             const std::vector<double>& x,
                                             const std::vector<double>& d) {
  if (static_cast<int>(x.size()) != pair.dim() ||
      static_cast<int>(d.size()) != pair.dim()) {
    throw std::invalid_argument("decode_with_dither: dimension mismatch");
  }
  std::vector<std::int64_t> t(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double r = pair.mod_coord(x[j] - d[j]);
    t[j] = pair.mod_coord(static_cast<std::int64_t>(std::nearbyint(r)));
  }
  return t;
}

CarryResult carry_reconstruct(
    const NestedLatticePair& pair,
    const std::vector<std::vector<std::int64_t>>& points) {
  const int K = static_cast<int>(points.size());
  if (K < 2) {
    throw std::invalid_argument("carry_reconstruct needs at least 2 points");
  }
  const int N = pair.dim();
  const std::int64_t q = pair.q();

  CarryResult result;
  result.rep_sum.assign(static_cast<std::size_t>(N), 0);
  for (const auto& point : points) {
    if (static_cast<int>(point.size()) != N) {
      throw std::invalid_argument("carry_reconstruct: dimension mismatch");
    }
    for (int j = 0; j < N; ++j) {
      // Nonnegative representative in [0, q); carries then fit [0, K-1].
      std::int64_t rep = point[static_cast<std::size_t>(j)] % q;
      if (rep < 0) rep += q;
      result.rep_sum[static_cast<std::size_t>(j)] += rep;
    }
  }

  result.carries.resize(static_cast<std::size_t>(N));
  result.mod_sum.resize(static_cast<std::size_t>(N));
  result.T = 1;
  for (int j = 0; j < N; ++j) {
    const std::int64_t s = result.rep_sum[static_cast<std::size_t>(j)];
    result.mod_sum[static_cast<std::size_t>(j)] = s % q;
    result.carries[static_cast<std::size_t>(j)] = s / q;
  }
  std::int64_t packed = 0;
  for (int j = 0; j < N; ++j) {
    packed = packed * K + result.carries[static_cast<std::size_t>(j)];
  }
  result.T = packed + 1;

  // Recover the representative sum from (T, mod_sum) alone and verify.
  std::int64_t unpack = result.T - 1;
  std::vector<std::int64_t> carries_back(static_cast<std::size_t>(N));
  for (int j = N - 1; j >= 0; --j) {
    carries_back[static_cast<std::size_t>(j)] = unpack % K;
    unpack /= K;
  }
  for (int j = 0; j < N; ++j) {
    const std::int64_t rebuilt =
        q * carries_back[static_cast<std::size_t>(j)] +
        result.mod_sum[static_cast<std::size_t>(j)];
    if (rebuilt != result.rep_sum[static_cast<std::size_t>(j)]) {
      throw std::logic_error("carry reconstruction failed to reproduce the sum");
    }
  }
  return result;
}

namespace {

LeakageResult leakage_by_enumeration(
    const NestedLatticePair& pair, int K,
    const std::vector<std::vector<std::int64_t>>& dither_num,
    std::int64_t denom, std::int64_t max_states, bool mod_reduce_sum) {
  if (K < 2) throw std::invalid_argument("exact_leakage needs K >= 2");
  if (denom < 1) throw std::invalid_argument("dither denominator must be >= 1");
  if (static_cast<int>(dither_num.size()) != K) {
    throw std::invalid_argument("exact_leakage: expected one dither per user");
  }
  const int N = pair.dim();
  const std::int64_t q = pair.q();

  double states_d = 1.0;
  for (int i = 0; i < N * K; ++i) states_d *= static_cast<double>(q);
  if (states_d > static_cast<double>(max_states)) {
    throw StateSpaceTooLarge("exact_leakage would enumerate " +
                             std::to_string(states_d) + " states, limit " +
                             std::to_string(max_states));
  }

  const std::int64_t per_point = ipow(q, N);
  const std::int64_t prefix_count = ipow(per_point, K - 1);
  const std::int64_t period = q * denom;  // coarse period in grid units

  // Observation coordinates in grid units stay within K times the region
  // half-width; pack them into one integer key per observation.
  const std::int64_t coord_span = 2 * K * period + 1;
  if (std::pow(static_cast<double>(coord_span), N) > 4.0e18) {
    throw StateSpaceTooLarge(
        "dither denominator too large to pack observations exactly");
  }

  // Dithered alphabet of user k: x(t) = (t * denom + num) reduced into the
  // centered region, one table per user per coordinate value of t.
  auto encode_coord = [&](std::int64_t t, std::int64_t num) {
    std::int64_t v = t * denom + num;
    std::int64_t r = v % period;
    if (r < 0) r += period;
    if (2 * r > period) r -= period;
    return r;  // grid units, in (-period/2, period/2]
  };

  std::vector<std::vector<std::int64_t>> points(
      static_cast<std::size_t>(per_point));
  for (std::int64_t i = 0; i < per_point; ++i) {
    points[static_cast<std::size_t>(i)] = pair.codebook_point(i);
  }

  std::unordered_map<std::int64_t, std::int64_t> s_counts;
  double h_cond_sum = 0.0;  // sum over prefixes of H(S | prefix)
  std::int64_t t_max = 0;

  std::vector<std::int64_t> prefix_point(static_cast<std::size_t>(K - 1));
  std::vector<std::vector<std::int64_t>> tuple(static_cast<std::size_t>(K));
  for (std::int64_t p = 0; p < prefix_count; ++p) {
    // Decode the prefix index into K-1 codebook points.
    std::int64_t rest = p;
    for (int k = K - 2; k >= 0; --k) {
      prefix_point[static_cast<std::size_t>(k)] = rest % per_point;
      rest /= per_point;
    }
    std::vector<std::int64_t> base(static_cast<std::size_t>(N), 0);
    for (int k = 0; k < K - 1; ++k) {
      const auto& t = points[static_cast<std::size_t>(
          prefix_point[static_cast<std::size_t>(k)])];
      tuple[static_cast<std::size_t>(k)] = t;
      for (int j = 0; j < N; ++j) {
        base[static_cast<std::size_t>(j)] +=
            encode_coord(t[static_cast<std::size_t>(j)],
                         dither_num[static_cast<std::size_t>(k)]
                                   [static_cast<std::size_t>(j)]);
      }
    }

    std::unordered_map<std::int64_t, std::int64_t> local;
    local.reserve(static_cast<std::size_t>(per_point));
    for (std::int64_t i = 0; i < per_point; ++i) {
      const auto& tK = points[static_cast<std::size_t>(i)];
      std::int64_t key = 0;
      for (int j = 0; j < N; ++j) {
        std::int64_t s = base[static_cast<std::size_t>(j)] +
                         encode_coord(tK[static_cast<std::size_t>(j)],
                                      dither_num[static_cast<std::size_t>(K - 1)]
                                                [static_cast<std::size_t>(j)]);
        if (mod_reduce_sum) {
          std::int64_t r = s % period;
          if (r < 0) r += period;
          if (2 * r > period) r -= period;
          s = r;
        }
        key = key * coord_span + (s + K * period);
      }
      ++local[key];
      ++s_counts[key];

      tuple[static_cast<std::size_t>(K - 1)] = tK;
      const CarryResult carry = carry_reconstruct(pair, tuple);
      t_max = std::max(t_max, carry.T);
    }
    h_cond_sum += entropy_bits(local, per_point);
  }

  const std::int64_t total = prefix_count * per_point;
  const double h_s = entropy_bits(s_counts, total);
  const double h_cond = h_cond_sum / static_cast<double>(prefix_count);

  LeakageResult result;
  result.leakage_bits = h_s - h_cond;
  result.bound_bits = N * std::log2(static_cast<double>(K));
  result.t_max = t_max;
  result.states = total;
  if (result.leakage_bits > result.bound_bits + 1e-12) {
    throw std::logic_error("leakage exceeded its N log2 K ceiling");
  }
  if (result.leakage_bits < 0.0) {
    // Mutual information cannot be negative; anything beyond float
    // cancellation noise means the counting is broken.
    if (result.leakage_bits < -1e-9) {
      throw std::logic_error("negative leakage from exact counting");
    }
    result.leakage_bits = 0.0;
  }
  return result;
}

}  // namespace

LeakageResult exact_leakage(
    const NestedLatticePair& pair, int K,
    const std::vector<std::vector<std::int64_t>>& dither_num,
    std::int64_t denom, std::int64_t max_states) {
  return leakage_by_enumeration(pair, K, dither_num, denom, max_states, false);
}

LeakageResult exact_leakage(const NestedLatticePair& pair, int K,
                            std::int64_t max_states) {
  const std::vector<std::vector<std::int64_t>> zeros(
      static_cast<std::size_t>(K),
      std::vector<std::int64_t>(static_cast<std::size_t>(pair.dim()), 0));
  return exact_leakage(pair, K, zeros, 1, max_states);
}

LeakageResult exact_leakage_mod_sum(const NestedLatticePair& pair, int K,
                                    std::int64_t max_states) {
  const std::vector<std::vector<std::int64_t>> zeros(
      static_cast<std::size_t>(K),
      std::vector<std::int64_t>(static_cast<std::size_t>(pair.dim()), 0));
  return leakage_by_enumeration(pair, K, zeros, 1, max_states, true);
}

WrapEstimate wrap_probability(const NestedLatticePair& pair,
                              const std::vector<double>& interferer_variances,
                              double noise_variance, std::int64_t trials,
                              std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("wrap_probability: trials >= 1");
  if (noise_variance < 0.0) {
    throw std::invalid_argument("wrap_probability: noise variance >= 0");
  }
  const int N = pair.dim();
  const double q = static_cast<double>(pair.q());
  const double half = q / 2.0;

  double interference = 0.0;
  std::vector<double> sides;
  sides.reserve(interferer_variances.size());
  for (const double v : interferer_variances) {
    if (v < 0.0) {
      throw std::invalid_argument("wrap_probability: variances >= 0");
    }
    interference += v;
    sides.push_back(std::sqrt(12.0 * v));  // hypercube side with variance v
  }

  WrapEstimate estimate;
  estimate.trials = trials;
  const double denom = noise_variance + interference;
  estimate.mu = denom > 0.0 ? (q * q / 12.0) / denom
                            : std::numeric_limits<double>::infinity();

  Rng rng(derive_seed(seed, rng_domain::kWrap, 0));
  const double sigma = std::sqrt(noise_variance);
  for (std::int64_t trial = 0; trial < trials; ++trial) {
    bool wrapped = false;
    for (int j = 0; j < N; ++j) {
      double y = sigma > 0.0 ? rng.gaussian(sigma) : 0.0;
      for (const double side : sides) {
        y += side * (rng.uniform() - 0.5);
      }
      if (y > half || y <= -half) wrapped = true;
    }
    if (wrapped) ++estimate.wraps;
  }
  estimate.probability =
      static_cast<double>(estimate.wraps) / static_cast<double>(trials);
  return estimate;
}

}  // namespace m2o
