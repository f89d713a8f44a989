#pragma once

#include <array>
#include <cstdint>

#include "twogroup/special.hpp"

namespace twogroup {

namespace detail {

// SplitMix64 (Steele, Lea and Flood, 2014); used only for seeding.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Deterministic substream of a 64-bit seed: stream k of seed s always
/// produces the same variates, no matter which thread consumes it. The
/// generator is xoshiro256++ 1.0 (Blackman and Vigna, public domain)
/// with its state filled by SplitMix64 from the seed and stream index;
/// normal variates come from the inverse-CDF transform, so every draw
/// consumes exactly one uniform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept {
    std::uint64_t init = seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1));
    for (auto& word : state_) word = detail::splitmix64_next(init);
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform draw strictly inside (0, 1) with 53-bit resolution.
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal(double mean = 0.0, double stddev = 1.0) {
    return mean + stddev * special::normal_quantile(next_uniform());
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace twogroup
