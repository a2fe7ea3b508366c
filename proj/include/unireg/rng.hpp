#pragma once

#include <cstdint>
#include <limits>
#include <span>

namespace unireg {

/// SplitMix64: 64-bit state, one add and a three-round mix per draw. Satisfies
/// UniformRandomBitGenerator so it plugs into <random> distributions.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  static constexpr std::uint64_t mix(std::uint64_t x) noexcept {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Seed for the independent stream identified by (seed, a, b), e.g.
/// (seed, n, replication). Streams do not depend on the order in which they
/// are created.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t h = SplitMix64::mix(seed ^ 0x6A09E667F3BCC909ULL);
  h = SplitMix64::mix(h ^ (a + 0x9E3779B97F4A7C15ULL));
  h = SplitMix64::mix(h ^ (b + 0xD1B54A32D192ED03ULL));
  return h;
}

inline SplitMix64 make_stream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return SplitMix64(stream_seed(seed, a, b));
}

/// Fills `out` with independent N(0, 1) draws.
void fill_standard_normal(SplitMix64& rng, std::span<double> out);

}  // namespace unireg
