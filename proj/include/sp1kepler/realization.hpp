#pragma once

// Poisson realization of co = so*(4n) on T*H^n_* / Sp(1):
//
//   X_u    = 1/4 <W, uW>
//   Y_v    = <Z, vZ>
//   S_uv   = 1/2 <W, (u.v) Z>        (u.v the matrix product)
//   L_u    = S_eu = 1/2 <W, uZ>
//   L_{u,v} = 1/2 (S_uv - S_vu)      (angular momentum)
//
// together with the Sp(1) moment maps and the quadratic identities these
// functions satisfy on each leaf |Im(W^dagger Z)| = 2 mu.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "sp1kepler/jordan.hpp"
#include "sp1kepler/poisson.hpp"
#include "sp1kepler/random.hpp"

namespace sp1kepler {

// ---------------------------------------------------------------------------
// Quadratic-form builders

/// 4x4 matrix of left multiplication by q on R^4 (column s = components of q * e_s).
Matrix left_mult_matrix(const Quaternion& q);
/// Real 4n x 4n matrix R with <U, M V> = U^T R V.
Matrix real_form(const QMatrix& m);

QuadObservable x_observable(const HermElement& u);
QuadObservable y_observable(const HermElement& v);
QuadObservable s_observable(const HermElement& u, const HermElement& v);
/// 1/2 <W, M Z> for an arbitrary quaternionic matrix M.
QuadObservable bilinear_observable(const QMatrix& m);
/// Writes 1/2 <W, M Z> into out without reallocating.
void bilinear_observable_into(const QMatrix& m, QuadObservable& out);
/// xi^a = -1/2 <e_a, W^dagger Z> for a = 1, 2, 3 (components along i, j, k).
QuadObservable xi_observable(std::size_t n, int a);

struct RealizationFamily {
  std::size_t n = 0;
  JordanBasis basis{1};
  std::vector<QuadObservable> x_obs;  // X_{e_alpha}
  std::vector<QuadObservable> y_obs;  // Y_{e_alpha}
  std::vector<QuadObservable> s_obs;  // S_{e_alpha e_beta}, index alpha * dim + beta

  std::size_t dim() const { return basis.dim(); }
  const QuadObservable& S(std::size_t alpha, std::size_t beta) const { return s_obs[alpha * dim() + beta]; }
  /// L_{e_alpha} = S_{e e_alpha}
  QuadObservable L(std::size_t alpha) const;
  /// L_{e_alpha, e_beta}
  QuadObservable L(std::size_t alpha, std::size_t beta) const;
};

RealizationFamily build_observables(std::size_t n);

/// Largest |f(Z g, W g) - f(Z, W)| over the family, relative to max(1, |f|).
double sp1_invariance_residual(const RealizationFamily& family, const PhasePoint& p, const Quaternion& g);

struct RelationResult {
  std::string name;
  std::size_t checks = 0;
  double max_residual = 0.0;
};

struct SoStarReport {
  std::size_t n = 0;
  std::vector<RelationResult> relations;  // XX, YY, XY, SX, SY, SS
  double max_residual() const;
};

/// Checks the six bracket families as exact quadratic-form identities over all
/// basis pairs / triples / quadruples. Residual of one check is
/// |{f,g} - rhs| / max(1, |f| |g|) in Frobenius norm.
SoStarReport verify_so_star_relations(const RealizationFamily& family);
SoStarReport verify_so_star_relations(std::size_t n);

struct MomentRelationReport {
  double coadjoint = 0.0;             // {xi^1, xi^2} = -xi^3 and cyclic
  double coadjoint_plus = 0.0;  // {xi^1, xi^2} = xi^3 and cyclic
  double invariance = 0.0;            // {xi^a, X_u}, {xi^a, Y_u}, {xi^a, S_uv} = 0
};

MomentRelationReport verify_moment_relations(const RealizationFamily& family);

// ---------------------------------------------------------------------------
// Moment maps and leaves

/// rho(Z, W) = -Im(W^dagger Z)
Quaternion moment_rho(const PhasePoint& p);
/// psi(Z, W, xi) = Im(W^dagger Z) + 2 xi; xi must be imaginary.
Quaternion moment_psi(const PhasePoint& p, const Quaternion& xi);
/// 1/2 |Im(W^dagger Z)|
double magnetic_charge(const PhasePoint& p);

struct LeafSpec {
  std::size_t n = 2;
  double mu = 0.0;
};

/// Returns (Z, W + Z alpha) with alpha = (nu - tau) / |Z|^2, so that
/// Im((W + Z alpha)^dagger Z) = tau for imaginary tau.
PhasePoint shift_to_target(const QVector& z, const QVector& w, const Quaternion& tau);
/// Gaussian draw moved onto the leaf |Im(W^dagger Z)| = 2 mu, keeping the
/// direction of Im(W^dagger Z) (i when it vanishes).
PhasePoint sample_leaf(const LeafSpec& spec, Rng& rng);

// ---------------------------------------------------------------------------
// Quadratic identities

/// Values of the realization at one point, in a fixed JordanBasis.
struct RealizationValues {
  std::size_t n = 0;
  std::size_t dim = 0;
  std::vector<double> X, Y, L;  // X_{e_a}, Y_{e_a}, L_{e_a}
  std::vector<double> S;        // S_{e_a e_b}, row-major
  double Xe = 0, Ye = 0, Le = 0, mu = 0;

  double Lpair(std::size_t a, std::size_t b) const { return 0.5 * (S[a * dim + b] - S[b * dim + a]); }
};

RealizationValues realization_values(const JordanBasis& basis, const PhasePoint& p);

/// H = 1/2 X_e / Y_e - 1 / Y_e
double hamiltonian_from_realization(double xe, double ye);
/// A_u = 1/2 (X_u - Y_u X_e / Y_e) + Y_u / Y_e
double lrl_from_realization(double xu, double yu, double xe, double ye);

/// |lhs - rhs| over the magnitude of the terms involved (0 when all vanish).
double relative_residual(double lhs, double rhs, double scale);

/// (2/n) sum L_a^2 = L_e^2 + X_e Y_e - mu^2
double primary_quadratic_residual(const JordanBasis& basis, const PhasePoint& p);
double primary_quadratic_residual(const RealizationValues& v);

/// Relations (i)-(vi). (ii) and (iv) are checked for every basis element u;
/// (vi) uses the Sp(1) coefficients
///   2/(n^2 (n-1)) sum_{a,b} L_{a,b}^2 = X_e Y_e - L_e^2 + mu^2.
std::array<double, 6> secondary_quadratic_residuals(const JordanBasis& basis, const PhasePoint& p);
std::array<double, 6> secondary_quadratic_residuals(const RealizationValues& v);

/// (vi) with the coefficients of the complex (U(1)) case:
///   4/n^3 sum L_{a,b}^2 = X_e Y_e - L_e^2 + (n-2)/n mu^2.
double relation_vi_complex_residual(const RealizationValues& v);

/// L^2 = 1/2 sum_{a,b} L_{a,b}^2
double angular_momentum_squared(const RealizationValues& v);
/// A^2 = -1 + sum_a A_{e_a}^2
double lrl_squared(const RealizationValues& v);

/// Energy formula with Sp(1) coefficients:
///   -2H (L^2 - n^2 (n-1) mu^2 / 2) = n (n-1) / 2 (n - 1 - A^2).
double energy_formula_residual(const JordanBasis& basis, const PhasePoint& p);
double energy_formula_residual(const RealizationValues& v);
/// Energy formula with the complex-case coefficients:
///   -2H (L^2 - n^2 (n-1) mu^2 / 4) = (n/2)^2 (n - 1 - A^2).
double energy_formula_complex_residual(const RealizationValues& v);

}  // namespace sp1kepler
