#pragma once

#include <cstdint>
#include <random>

namespace bsdtest {

/// Engine used for every random draw in the library.
using Engine = std::mt19937_64;

/// One round of the SplitMix64 output function (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replicate `replicate` of an experiment seeded with `seed`.
/// Distinct (seed, replicate) pairs give well-separated engine seeds, so
/// replicates can be drawn in any order or concurrently.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t replicate) {
  return splitmix64(splitmix64(seed) ^ splitmix64(replicate + 0x632be59bd9b4e019ULL));
}

inline Engine make_substream(std::uint64_t seed, std::uint64_t replicate) {
  return Engine{substream_seed(seed, replicate)};
}

}  // namespace bsdtest
