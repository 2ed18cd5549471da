#pragma once

#include <cstdint>
#include <vector>

#include "m2o/rng.hpp"

namespace m2o {

/* ------------------------------------------------------------------------
 * Nested integer lattice pairs.
 *
 * The fine lattice is the integer grid Z^N, the coarse lattice is q Z^N,
 * and the fundamental region of the coarse lattice is the centered
 * half-open hypercube (-q/2, q/2]^N. The codebook, fine points inside the
 * region, has q^N members and carries log2 q bits per dimension. Under
 * coordinatewise addition followed by reduction into the region the
 * codebook is the abelian group (Z_q)^N; sums of codewords land back on a
 * codeword after one reduction, which is what receiver K exploits to
 * decode an aligned sum without separating its summands.
 *
 * Conventions used throughout:
 *   - reduction maps x to x - q * ceil(x/q - 1/2), the unique
 *     representative in (-q/2, q/2]; the boundary point q/2 is kept,
 *     -q/2 is mapped to +q/2
 *   - integer codeword coordinates range over [-(q-1)/2 ... q/2] (integer
 *     division), e.g. {-1, 0, 1, 2} for q = 4 and {-2 ... 2} for q = 5
 * ------------------------------------------------------------------------ */

class NestedLatticePair {
 public:
  // dim in [1, 4], q >= 2. Throws std::invalid_argument otherwise.
  NestedLatticePair(int dim, std::int64_t q);

  int dim() const { return dim_; }
  std::int64_t q() const { return q_; }

  std::int64_t coord_min() const { return -((q_ - 1) / 2); }
  std::int64_t coord_max() const { return q_ / 2; }
  std::int64_t codebook_size_per_dim() const { return q_; }
  double rate_per_dim() const;  // log2 q

  // Centered representative of x modulo q, in (-q/2, q/2].
  double mod_coord(double x) const;
  std::int64_t mod_coord(std::int64_t v) const;

  // Coordinatewise reduction modulo the coarse lattice.
  std::vector<double> mod_coarse(const std::vector<double>& x) const;
  std::vector<std::int64_t> mod_coarse(const std::vector<std::int64_t>& v) const;

  // Nearest codebook point under Euclidean distance. The codebook is a
  // product of per-coordinate ranges, so the search reduces to rounding
  // and clamping each coordinate; ties round up. Guarded by the q^N <= 1e6
  // enumeration contract. Throws CodebookTooLarge beyond it.
  std::vector<std::int64_t> nearest_codebook_point(
      const std::vector<double>& y) const;

  // Enumerates the codebook lexicographically; index in [0, q^N).
  std::vector<std::int64_t> codebook_point(std::int64_t index) const;
  std::int64_t codebook_index(const std::vector<std::int64_t>& t) const;

 private:
  int dim_;
  std::int64_t q_;
};

/* A dithered transmission: x = (t + d) mod coarse. The dither d is known
 * to both ends; subtracting it and reducing again recovers t exactly. */
struct DitheredWord {
  std::vector<std::int64_t> t;  // canonical codeword, in (-q/2, q/2]^N
  std::vector<double> d;
  std::vector<double> x;        // (t + d) mod coarse
};

// Encodes a fine-lattice point under a dither. Coordinates of t must be
// integers (any representative of the coset is accepted and canonicalized);
// throws PointNotInCodebook otherwise.
DitheredWord encode(const NestedLatticePair& pair,
                    const std::vector<double>& t, const std::vector<double>& d);

// Inverse of encode for the canonical representative.
std::vector<std::int64_t> decode_with_dither(const NestedLatticePair& pair,
                                             const std::vector<double>& x,
                                             const std::vector<double>& d);

/* ------------------------------------------------------------------------
 * Carry reconstruction.
 *
 * The sum of K codewords leaves the fundamental region; the per-coordinate
 * overflow count (the carry) is what the reduction discards. Working on
 * the nonnegative coset representatives in [0, q), each carry lies in
 * [0, K-1], so the N carries pack into a single integer
 *
 *   T = 1 + sum_j carry_j * K^(N-1-j),   1 <= T <= K^N,
 *
 * with coordinate 0 most significant. (T, sum mod coarse) then determines
 * the representative sum exactly: knowing T costs at most N log2 K bits,
 * which is the leakage ceiling of the aligned eavesdropper observation.
 * ------------------------------------------------------------------------ */

struct CarryResult {
  std::int64_t T = 0;                  // packed carry index, in [1, K^N]
  std::vector<std::int64_t> carries;   // per coordinate, in [0, K-1]
  std::vector<std::int64_t> rep_sum;   // sum of [0, q) representatives
  std::vector<std::int64_t> mod_sum;   // rep_sum reduced into [0, q)
};

// points: K codewords (any coset representatives). K >= 2. Verifies
// internally that rep_sum is reproduced from (T, mod_sum) and throws
// std::logic_error if not.
CarryResult carry_reconstruct(const NestedLatticePair& pair,
                              const std::vector<std::vector<std::int64_t>>& points);

/* ------------------------------------------------------------------------
 * Exact information leakage on the finite group.
 *
 * exact_leakage enumerates all q^(N K) codeword tuples, t_k independent
 * uniform, forms the eavesdropper observation S = sum_k (t_k + d_k) mod
 * coarse as an exact rational vector, and computes I(t_1..t_{K-1}; S) in
 * bits by direct counting. Dithers are rationals on a refinement grid:
 * coordinate j of dither k is dither_num[k][j] / denom. The result never
 * exceeds N log2 K. exact_leakage_mod_sum instead scores the observation
 * (sum_k t_k) mod coarse, for which the leakage is exactly zero: the group
 * sum of a uniform independent term is uniform on the group.
 * ------------------------------------------------------------------------ */

struct LeakageResult {
  double leakage_bits = 0;
  double bound_bits = 0;    // N log2 K
  std::int64_t t_max = 0;   // largest carry index seen across all tuples
  std::int64_t states = 0;  // q^(N K) tuples enumerated
};

LeakageResult exact_leakage(const NestedLatticePair& pair, int K,
                            const std::vector<std::vector<std::int64_t>>& dither_num,
                            std::int64_t denom,
                            std::int64_t max_states = 10'000'000);

// Zero-dither convenience overload.
LeakageResult exact_leakage(const NestedLatticePair& pair, int K,
                            std::int64_t max_states = 10'000'000);

LeakageResult exact_leakage_mod_sum(const NestedLatticePair& pair, int K,
                                    std::int64_t max_states = 10'000'000);

/* Monte Carlo estimate of the coarse-region wrap probability: interferers
 * U_i uniform on centered hypercubes with the given per-dimension
 * variances, noise Gaussian, event = any coordinate of sum + noise leaves
 * (-q/2, q/2]. mu is the ratio of the region's per-dimension second moment
 * q^2/12 to the total interference-plus-noise power; wrap probability
 * vanishes as mu grows and approaches one when mu < 1. */
struct WrapEstimate {
  double probability = 0;
  double mu = 0;
  std::int64_t wraps = 0;
  std::int64_t trials = 0;
};

WrapEstimate wrap_probability(const NestedLatticePair& pair,
                              const std::vector<double>& interferer_variances,
                              double noise_variance, std::int64_t trials,
                              std::uint64_t seed);

}  // namespace m2o
