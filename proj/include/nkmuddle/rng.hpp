#pragma once

#include <bit>
#include <cassert>
#include <concepts>
#include <cstdint>

namespace nkmuddle {

// SplitMix64 finalizer. Used both as the seeding helper for the main engine
// and as the mixing step for domain-separated stream derivation.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return mix64(state_);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256** (Blackman & Vigna, public domain). The algorithm is fixed, so
// a seed pins the exact output sequence on every platform and toolchain —
// the standard <random> distributions make no such guarantee.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = std::rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1) with 53 random mantissa bits.
  double unit_real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), unbiased (bitmask rejection).
  std::uint64_t uniform_below(std::uint64_t bound) {
    assert(bound > 0);
    if (bound == 1) return 0;
    const std::uint64_t mask = ~std::uint64_t{0} >> std::countl_zero(bound - 1);
    for (;;) {
      const std::uint64_t v = next() & mask;
      if (v < bound) return v;
    }
  }

  bool bernoulli(double p) { return unit_real() < p; }

 private:
  std::uint64_t state_[4];
};

using Rng = Xoshiro256;

template <class R>
concept RandomStream = requires(R r, std::uint64_t bound, double p) {
  { r.uniform_below(bound) } -> std::convertible_to<std::uint64_t>;
  { r.unit_real() } -> std::convertible_to<double>;
  { r.bernoulli(p) } -> std::convertible_to<bool>;
};

}  // namespace nkmuddle
