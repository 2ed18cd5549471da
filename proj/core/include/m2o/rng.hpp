#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace m2o {

/* Deterministic random streams.
 *
 * Every randomized routine in this library draws from Rng, which wraps the
 * fully specified std::mt19937_64 engine and hand-rolled output transforms.
 * The standard library distributions are deliberately avoided because their
 * algorithms are implementation-defined; the transforms below pin the byte
 * sequence of every result to (seed, call order) on every platform.
 *
 *   uniform():     53-bit mantissa trick, (x >> 11) * 2^-53, in [0, 1)
 *   uniform_int(): rejection sampling on the top of the 64-bit range,
 *                  unbiased for any bound
 *   gaussian():    Box-Muller on two fresh uniforms, cosine branch first,
 *                  the sine mate is cached and returned by the next call
 *
 * Substreams are derived with splitmix64, the de-facto standard seed mixer,
 * so (seed, domain, index) identifies a stream independent of all others.
 */

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Mixes a base seed with a domain tag and an index into a fresh seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t domain,
                                 std::uint64_t index) {
  std::uint64_t s = splitmix64(base ^ 0x243f6a8885a308d3ULL);
  s = splitmix64(s ^ domain);
  s = splitmix64(s ^ index);
  return s;
}

// Stream domain tags, one per independent consumer of randomness.
namespace rng_domain {
inline constexpr std::uint64_t kDither = 0xd17e;
inline constexpr std::uint64_t kReceiverK = 0xcafe;
inline constexpr std::uint64_t kReceiverUser = 0xbeef;
inline constexpr std::uint64_t kWrap = 0x3a9;
inline constexpr std::uint64_t kScan = 0x5ca1;
inline constexpr std::uint64_t kTrial = 0x7319;
}  // namespace rng_domain

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1, unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t bound) {
    const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller; consumes two uniforms every other call.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);  // log(0) guard; rejection keeps the stream aligned
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

  double gaussian(double stddev) { return stddev * gaussian(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace m2o
