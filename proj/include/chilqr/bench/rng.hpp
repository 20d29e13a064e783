#pragma once

#include <cstdint>

#include "chilqr/types.hpp"

namespace chilqr {

// Counter-based Gaussian stream: every draw is a pure function of
// (seed, stream, counter), so trials are reproducible and order-independent.
namespace rng {

inline uint64_t splitmix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline double uniform01(uint64_t seed, uint64_t stream, uint64_t counter) {
  uint64_t k = splitmix64(seed ^ splitmix64(stream ^ splitmix64(counter)));
  return ((k >> 11) + 0.5) * (1.0 / 9007199254740992.0);  // (0, 1)
}

// Box-Muller over the counter stream.
inline double normal(uint64_t seed, uint64_t stream, uint64_t counter) {
  double u1 = uniform01(seed, stream, 2 * counter);
  double u2 = uniform01(seed, stream, 2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Vec normal_vector(int n, uint64_t seed, uint64_t stream) {
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = normal(seed, stream, i);
  return v;
}

}  // namespace rng
}  // namespace chilqr
