#pragma once

#include <cstdint>
#include <random>

namespace tollmatch {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  return splitmix64(splitmix64(seed) ^ splitmix64(~tag));
}

// One generator per (seed, concern, index). Each concern of a run draws from
// its own stream, and per-entity streams are keyed by index, so drawing more
// values for one concern never shifts the draws of another.
inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t concern,
                                 std::uint64_t index = 0) {
  return std::mt19937_64{mix_seed(mix_seed(seed, concern), index)};
}

}  // namespace tollmatch
