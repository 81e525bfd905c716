// Deterministic random streams.
//
// Stream-splitting rule: the generator for (seed, stream) is xoshiro256**
// whose 256-bit state is filled by four successive SplitMix64 outputs
// started from mix(mix(seed) + stream). Each simulation round uses its own
// stream index, so a round's outcome does not depend on evaluation order.
// Doubles are formed from the top 53 bits so results are identical across
// standard libraries (std::uniform_real_distribution is not).
#pragma once

#include <cstdint>
#include <limits>

namespace blindsim {

__extension__ typedef unsigned __int128 uint128_t;

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t x = splitmix64_mix(splitmix64_mix(seed) + stream);
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      word = splitmix64_mix(x);
    }
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0, 1).
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) noexcept { return uniform() < p; }

  /// Uniform integer in [0, n); n must be > 0. Lemire's multiply-shift with
  /// rejection, so the result is exactly uniform.
  std::uint64_t below(std::uint64_t n) noexcept {
    for (;;) {
      const uint128_t m = static_cast<uint128_t>((*this)()) * n;
      const auto low = static_cast<std::uint64_t>(m);
      if (low >= n || low >= (0 - n) % n) {
        return static_cast<std::uint64_t>(m >> 64);
      }
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

}  // namespace blindsim
