// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace drmimo {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream for (master seed, trial, lane). Equal tuples give
// equal streams, so trials can run in any order or on any thread and still
// reproduce the same draws.
inline std::mt19937_64 substream_rng(std::uint64_t master, std::uint64_t trial = 0,
                                     std::uint64_t lane = 0) {
  std::uint64_t s = mix64(master ^ 0xd1b54a32d192ed03ULL);
  s = mix64(s ^ mix64(trial + 0xa5a5a5a5a5a5a5a5ULL));
  s = mix64(s ^ mix64(lane + 0x2545f4914f6cdd1dULL));
  return std::mt19937_64(s);
}

// Uniform doubles with a fixed bit mapping; avoids any dependence on the
// standard library's distribution implementations.
inline double uniform01(std::mt19937_64& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline double uniform_open0(std::mt19937_64& g) {
  return (static_cast<double>(g() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
}

inline double normal(std::mt19937_64& g) {
  const double u = uniform_open0(g);
  const double v = uniform01(g);
  return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
}

// Circularly symmetric complex Gaussian with unit variance (CN(0,1)).
inline std::complex<double> complex_normal(std::mt19937_64& g) {
  const double u = uniform_open0(g);
  const double v = uniform01(g);
  const double r = std::sqrt(-std::log(u));
  return {r * std::cos(2.0 * M_PI * v), r * std::sin(2.0 * M_PI * v)};
}

}  // namespace drmimo
