#pragma once

#include <cstdint>

namespace discrelab {

// SplitMix64 finalizer.  All randomness in the library is counter-based:
// a draw is a pure function of (seed, stream, counter), so cell j of a
// jittered sample never depends on how many cells were sampled before it.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t hash2(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (mix64(b) + 0x9e3779b97f4a7c15ull));
}

inline std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  return hash2(hash2(a, b), c);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double to_unit(std::uint64_t h) { return double(h >> 11) * 0x1.0p-53; }

// value in [0,1) determined by (seed, stream, counter) only
inline double uniform01(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t counter) {
  return to_unit(hash3(seed, stream, counter));
}

}  // namespace discrelab
