#pragma once

// Sternberg-side description: the Kepler cone C_1 = { n Z Z^dagger }, horizontal
// lifts through the principal connection Im(Z^dagger dZ) / |Z|^2, and the
// (x, pi) variables on T C_1.

#include <vector>

#include "sp1kepler/jordan.hpp"
#include "sp1kepler/quaternion.hpp"

namespace sp1kepler {

struct ConePoint {
  HermElement x;  // n Z Z^dagger
  double r = 0;   // Re tr(x) / n = |Z|^2
};

struct CotangentData {
  ConePoint x;
  HermElement pi;  // in T_x C_1
  QVector Z, W;    // upstairs point the data was built from
};

/// Throws std::domain_error when |Z| <= kDomainEps.
ConePoint cone_point(const QVector& z);

/// Orthonormal basis of T_x C_1 (dimension 4n - 3), from n (v Z^dagger + Z v^dagger)
/// over the coordinate directions v.
std::vector<HermElement> tangent_basis(const QVector& z);

/// Zdot = (xdot Z - (Re tr xdot / 2) Z) / (n |Z|^2). xdot is projected onto
/// T_x C_1 first; std::invalid_argument if it is not tangent.
QVector horizontal_lift(const QVector& z, const HermElement& xdot);

/// <pi | t> = <W, t Z - (Re tr t / 2) Z> / (n |Z|^2) for t in T_x C_1.
CotangentData pi_from_W(const QVector& z, const QVector& w);

/// <x | pi o pi> + mu^2 / <e | x>
double sternberg_xe(const CotangentData& d, double mu);

struct PullbackResiduals {
  double position = 0;  // max_u |<x|u> - <Z, uZ>|
  double energy = 0;    // |<x|pi^2> + mu^2/<e|x> - |W|^2/4|
};

PullbackResiduals pullback_check(const QVector& z, const QVector& w);

/// 1/2 <x|pi^2> / r + mu^2 / (2 r^2) - 1 / r
double hamiltonian_downstairs(const CotangentData& d, double mu);
/// 1/2 (X_u - Y_u X_e / Y_e) + Y_u / Y_e with Y = <x|.>, X_e = sternberg_xe and
/// X_u = 1/4 <W, uW> from the upstairs point.
double lrl_downstairs(const CotangentData& d, double mu, const HermElement& u);

}  // namespace sp1kepler
