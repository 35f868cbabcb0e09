#pragma once

#include <cstdint>

namespace vck {

// splitmix64: fast deterministic 64-bit stream, identical on every platform.
// All randomness in the library flows through this from a single caller seed.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    std::uint64_t limit = ~0ull - ~0ull % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r >= limit);
    return r % n;
  }
};

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Independent substream for (seed, a, b), e.g. (experiment seed, concept, trial).
inline Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return Rng(mix64(seed + 0x9e3779b97f4a7c15ull * (a + 1)) ^ mix64(b + 0x7f4a7c15ull));
}

}  // namespace vck
