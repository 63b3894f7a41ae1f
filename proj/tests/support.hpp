#pragma once

#include <doctest.h>

#include <cmath>

#include "sp1kepler/jordan.hpp"
#include "sp1kepler/poisson.hpp"
#include "sp1kepler/random.hpp"

namespace sp1kepler::testing {

inline constexpr std::uint64_t kSeed = 20240607;

inline PhasePoint random_point(std::size_t n, Rng& rng) {
  QVector z = gaussian_qvector(n, rng);
  while (norm(z) < 1e-3) z = gaussian_qvector(n, rng);
  return PhasePoint(z, gaussian_qvector(n, rng));
}

inline double qdist(const Quaternion& a, const Quaternion& b) { return norm(a - b); }

inline double vdist(const QVector& a, const QVector& b) { return norm(a - b); }

inline double hdist(const HermElement& a, const HermElement& b) { return frobenius((a - b).mat()); }

// Z = (1, 0), W = (2k, 0)
inline PhasePoint hand_point() {
  return PhasePoint(QVector{Quaternion::one(), Quaternion{}}, QVector{Quaternion::k() * 2.0, Quaternion{}});
}

}  // namespace sp1kepler::testing
