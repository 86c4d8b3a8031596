#pragma once

#include <cassert>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace fidsim {

// SplitMix64 finalizer, used to derive engine seeds from (master, stream)
// pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                        std::uint64_t stream_id) {
  return splitmix64(splitmix64(master_seed) ^
                    splitmix64(stream_id + 0x632be59bd9b4e019ull));
}

/// Deterministic random stream. Streams for distinct (master_seed,
/// stream_id) pairs are derived independently, so trials indexed by
/// stream_id can be generated in any order and on any thread with
/// identical results.
///
/// Distributions are generated from raw engine words rather than through
/// <random> distribution adaptors, whose algorithms are
/// implementation-defined; mt19937_64 output itself is fully specified by
/// the standard, so all sequences are platform-independent.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_id)
      : engine_(derive_stream_seed(master_seed, stream_id)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, bound). Mask rejection keeps the draw exactly uniform.
  std::uint64_t next_below(std::uint64_t bound) {
    assert(bound > 0);
    std::uint64_t mask = bound - 1;
    mask |= mask >> 1;
    mask |= mask >> 2;
    mask |= mask >> 4;
    mask |= mask >> 8;
    mask |= mask >> 16;
    mask |= mask >> 32;
    for (;;) {
      const std::uint64_t value = engine_() & mask;
      if (value < bound) return value;
    }
  }

  bool next_bernoulli(double p) { return next_double() < p; }

 private:
  std::mt19937_64 engine_;
};

/// Standard normal variate (Box-Muller, cosine branch).
inline double standard_normal(RandomStream& rng) {
  const double u = 1.0 - rng.next_double();  // (0, 1]
  const double v = rng.next_double();
  return std::sqrt(-2.0 * std::log(u)) *
         std::cos(2.0 * std::numbers::pi * v);
}

}  // namespace fidsim
