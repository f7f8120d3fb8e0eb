#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace lensbeam {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent per-episode seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for run `index` of a Monte Carlo batch with master seed `master`.
constexpr std::uint64_t episode_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + index);
}

inline double gaussian(Rng& rng, double variance) {
  if (variance <= 0.0) {
    // Still consume a draw so stream alignment does not depend on parameters.
    std::normal_distribution<double>{}(rng);
    return 0.0;
  }
  return std::normal_distribution<double>(0.0, std::sqrt(variance))(rng);
}

/// Circularly-symmetric complex Gaussian with total variance `variance`
/// (variance / 2 per real component).
inline std::complex<double> complex_gaussian(Rng& rng, double variance) {
  const double half = 0.5 * variance;
  const double re = gaussian(rng, half);
  const double im = gaussian(rng, half);
  return {re, im};
}

}  // namespace lensbeam
