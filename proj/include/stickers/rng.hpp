// Pinned random generator contract for reproducible simulation.
//
// Generator: xoshiro256++ (Blackman & Vigna), period 2^256 - 1, seeded
// through SplitMix64 so any 64-bit seed yields a well-mixed state. Stream s
// of a batch is seeded with master_seed + (s+1) * 0x9E3779B97F4A7C15, making
// every replication a pure function of (master_seed, replication index).
// Bounded draws use Lemire's unbiased multiply-then-reject method. Changing
// any of this changes published numbers; it is part of the output contract.
#pragma once

#include <array>
#include <cstdint>

namespace stickers {

struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

class Xoshiro256PlusPlus {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256PlusPlus(std::uint64_t seed) {
    SplitMix64 mixer(seed);
    for (auto& word : state_) word = mixer.next();
  }

  static Xoshiro256PlusPlus for_stream(std::uint64_t master_seed, std::uint64_t stream) {
    return Xoshiro256PlusPlus(master_seed + (stream + 1) * 0x9E3779B97F4A7C15ull);
  }

  std::uint64_t next() {
    std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  std::uint64_t operator()() { return next(); }

  // Unbiased draw from {0, ..., bound-1} (Lemire 2019). Uses the upper 32
  // bits of the generator output, which are the better-mixed ones.
  std::uint32_t uniform_below(std::uint32_t bound) {
    std::uint64_t x = next() >> 32;
    std::uint64_t m = x * bound;
    auto low = static_cast<std::uint32_t>(m);
    if (low < bound) {
      std::uint32_t threshold = (0u - bound) % bound;  // 2^32 mod bound
      while (low < threshold) {
        x = next() >> 32;
        m = x * bound;
        low = static_cast<std::uint32_t>(m);
      }
    }
    return static_cast<std::uint32_t>(m >> 32);
  }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ull; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

  std::array<std::uint64_t, 4> state_{};
};

}  // namespace stickers
