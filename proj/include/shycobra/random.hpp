#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shycobra {

using Rng = std::mt19937_64;

/// Derives an independent, reproducible stream from a root seed and a tuple of stream keys
/// (e.g. node id and iteration), so that results do not depend on evaluation order.
inline Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {}) {
  // splitmix64 finaliser over the key sequence
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(seed);
  for (auto k : keys) h = mix(h ^ mix(k + 0x632be59bd9b4e019ULL));
  return Rng(h);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

inline double gaussian(Rng& rng, double stddev) {
  if (stddev <= 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, stddev)(rng);
}

}  // namespace shycobra
