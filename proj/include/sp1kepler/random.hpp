#pragma once

// Seeded random streams. Every random point in a suite is drawn from its own
// generator, derived from (seed, stream, index), so results do not depend on
// iteration order or worker count.

#include <cmath>
#include <cstdint>
#include <random>

#include "sp1kepler/jordan.hpp"
#include "sp1kepler/quaternion.hpp"

namespace sp1kepler {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ index);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

inline Quaternion gaussian_quaternion(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double w = g(rng), x = g(rng), y = g(rng), z = g(rng);
  return {w, x, y, z};
}

inline QVector gaussian_qvector(std::size_t n, Rng& rng) {
  QVector v(n);
  for (std::size_t a = 0; a < n; ++a) v[a] = gaussian_quaternion(rng);
  return v;
}

inline Quaternion random_unit_quaternion(Rng& rng) {
  for (;;) {
    const Quaternion q = gaussian_quaternion(rng);
    const double r = norm(q);
    if (r > 1e-6) return q * (1.0 / r);
  }
}

inline HermElement random_hermitian(std::size_t n, Rng& rng) {
  QMatrix m(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) m(a, b) = gaussian_quaternion(rng);
  return hermitian_part(m);
}

}  // namespace sp1kepler
