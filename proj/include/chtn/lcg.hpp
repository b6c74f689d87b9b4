#pragma once

#include <cstdint>

namespace chtn {

// 64-bit linear congruential generator with Knuth's MMIX constants:
//   state <- 6364136223846793005 * state + 1442695040888963407  (mod 2^64)
// uniform() takes the top 53 bits of the new state, giving a double in [0, 1).
// The first draw advances the state once from the seed.
class Lcg64 {
 public:
  static constexpr std::uint64_t kMultiplier = 6364136223846793005ULL;
  static constexpr std::uint64_t kIncrement = 1442695040888963407ULL;

  explicit constexpr Lcg64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ = kMultiplier * state_ + kIncrement;
    return state_;
  }

  constexpr double uniform() {
    return static_cast<double>(next() >> 11) * (1.0 / 9007199254740992.0);
  }

 private:
  std::uint64_t state_;
};

}  // namespace chtn
