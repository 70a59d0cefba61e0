#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace rotobs {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent generator for substream `stream` of a 64-bit master seed.
///
/// The stream seed is splitmix64(seed ⊕ splitmix64(stream)), so stream k
/// depends only on (seed, k): adding runs never reshuffles earlier ones.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(stream)));
}

inline double standard_normal(std::mt19937_64& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

inline Eigen::Vector3d gaussian3(std::mt19937_64& rng, double stddev = 1.0) {
  Eigen::Vector3d g;
  for (int i = 0; i < 3; ++i) g(i) = stddev * standard_normal(rng);
  return g;
}

}  // namespace rotobs
