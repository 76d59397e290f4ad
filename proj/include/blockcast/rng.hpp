#pragma once

#include <array>
#include <cstdint>

// Deterministic random streams built on SplitMix64.
//
// Every consumer derives an independent stream key from a user seed plus
// integer coordinates (tree path, level, sample index, ...) so that parallel
// generation is order-independent and reproducible. The mixing function and
// the key-derivation rule below are part of the tool's contract; test vectors
// pin the streams.

namespace blockcast {

// SplitMix64 finalizer (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1), 53-bit resolution
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // index uniform in [0, size)
  std::uint64_t next_index(std::uint64_t size) {
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(size));
  }

  // one draw from a length-4 probability row (linear CDF scan)
  int next_state(const std::array<double, 4>& row) {
    const double u = next_double();
    double acc = 0.0;
    for (int s = 0; s < 3; ++s) {
      acc += row[static_cast<std::size_t>(s)];
      if (u < acc) return s;
    }
    return 3;
  }

 private:
  std::uint64_t state_;
};

// Stream key for per-sample randomness: key(seed, a, b, c).
// Used by density evolution as (seed, level, root_state, sample_index).
constexpr std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t a,
                                      std::uint64_t b, std::uint64_t c) {
  std::uint64_t k = splitmix_mix(seed);
  k = splitmix_mix(k ^ (a * 0xd1342543de82ef95ULL));
  k = splitmix_mix(k ^ (b * 0xaf251af3b0f025b5ULL));
  k = splitmix_mix(k ^ (c * 0x9e3779b97f4a7c15ULL));
  return k;
}

// Subtree splitting rule for the broadcast sampler: the j-th child (0-based)
// of a node with key k gets key child_key(k, j).
constexpr std::uint64_t child_key(std::uint64_t parent_key, std::uint64_t j) {
  return splitmix_mix(parent_key ^ ((j + 1) * 0x9e3779b97f4a7c15ULL));
}

constexpr std::uint64_t root_key(std::uint64_t seed) {
  return splitmix_mix(seed ^ 0x62726f6164636173ULL);  // "broadcas" tag
}

}  // namespace blockcast
