#pragma once

#include <cstdint>
#include <random>

namespace mvlsw {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for replicate r of a run seeded with `seed`. Depends only on
/// (seed, r), so replicates can be generated in any order or in parallel.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replicate) {
  return splitmix64(seed ^ splitmix64(replicate + 0x632be59bd9b4e019ULL));
}

using Rng = std::mt19937_64;

}  // namespace mvlsw
