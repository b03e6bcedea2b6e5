#pragma once

#include <cmath>
#include <cstdint>

#include "chaosbound/schema.hpp"

namespace chaosbound::rng {

/// splitmix64 finalizer; the basis of all counter-based draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  return splitmix64(a ^ (splitmix64(b) + 0x9e3779b97f4a7c15ULL));
}

/// Uniform in [0, 1), never exactly 0 (safe for logs).
inline double uniform01(std::uint64_t key) {
  const std::uint64_t bits = splitmix64(key) >> 11;  // 53 bits
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

inline double gaussian(std::uint64_t key) {
  const double u1 = uniform01(mix(key, 0x67617573ULL));
  const double u2 = uniform01(mix(key, 0x7261646fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

inline double rademacher(std::uint64_t key) {
  return (splitmix64(key) & 1ULL) ? 1.0 : -1.0;
}

/// One draw of the given entry distribution, a pure function of the key.
inline double draw(const DistributionSpec& dist, std::uint64_t key) {
  switch (dist.kind) {
    case DistributionKind::Gaussian:
      return gaussian(key);
    case DistributionKind::Rademacher:
    case DistributionKind::EdgeRademacher:
      return rademacher(key);
    case DistributionKind::StandardizedBernoulli: {
      const double p = dist.param;
      return uniform01(key) < p ? std::sqrt((1.0 - p) / p) : -std::sqrt(p / (1.0 - p));
    }
    case DistributionKind::CenteredChiSq1: {
      const double g = gaussian(key);
      return g * g - 1.0;
    }
  }
  return 0.0;
}

/// The edge variable of the graph-matrix input distribution: one Rademacher
/// per unordered pair of ground-set elements, shared by every module that
/// materializes the same seed.
inline double edge_rademacher(std::uint64_t seed, long long a, long long b) {
  if (a > b) std::swap(a, b);
  return rademacher(mix(mix(seed, 0x65646765ULL), mix(static_cast<std::uint64_t>(a),
                                                      static_cast<std::uint64_t>(b))));
}

}  // namespace chaosbound::rng
