#pragma once

// The Euclidean Jordan algebra V = H_n(H) of quaternionic hermitian matrices.
//
//   u o v      = (uv + vu) / 2
//   {u v z}    = (uvz + zvu) / 2        (= S_uv z)
//   <u | v>    = Re tr(uv) / n          (so <e | e> = 1)

#include <cstddef>
#include <span>
#include <vector>

#include "sp1kepler/dense.hpp"
#include "sp1kepler/quaternion.hpp"

namespace sp1kepler {

/// Hermitian quaternionic matrix. Construction symmetrizes drift up to 1e-6
/// (relative) and rejects anything further from hermitian.
class HermElement {
 public:
  static constexpr double kSymmetrizeTol = 1e-12;
  static constexpr double kRejectTol = 1e-6;

  HermElement() = default;
  explicit HermElement(QMatrix mat);

  static HermElement identity(std::size_t n);
  static HermElement zero(std::size_t n);

  std::size_t order() const { return mat_.order(); }
  const QMatrix& mat() const { return mat_; }

  HermElement& operator+=(const HermElement& o);
  HermElement& operator-=(const HermElement& o);
  HermElement& operator*=(double s);

 private:
  struct Unchecked {};
  HermElement(QMatrix mat, Unchecked) : mat_(std::move(mat)) {}
  friend HermElement hermitian_part(const QMatrix&);

  QMatrix mat_;
};

HermElement operator+(HermElement a, const HermElement& b);
HermElement operator-(HermElement a, const HermElement& b);
HermElement operator*(HermElement a, double s);
HermElement operator*(double s, HermElement a);

/// (m + m^dagger) / 2 without the drift check.
HermElement hermitian_part(const QMatrix& m);

HermElement jordan_product(const HermElement& u, const HermElement& v);
HermElement triple_product(const HermElement& u, const HermElement& v, const HermElement& z);
double inner(const HermElement& u, const HermElement& v);

/// Orthonormal basis of H_n(H): sqrt(n) E_aa first, then for a < b (lexicographic)
/// sqrt(n/2) (E_ab q + E_ba conj(q)) with q = 1, i, j, k.
class JordanBasis {
 public:
  explicit JordanBasis(std::size_t n);

  std::size_t order() const { return n_; }
  std::size_t dim() const { return elements_.size(); }
  const HermElement& operator[](std::size_t alpha) const { return elements_[alpha]; }
  const std::vector<HermElement>& elements() const { return elements_; }

  /// Coordinates <e_alpha | u>.
  std::vector<double> coords(const HermElement& u) const;
  HermElement element(std::span<const double> coords) const;

 private:
  std::size_t n_;
  std::vector<HermElement> elements_;
};

JordanBasis orthonormal_basis(std::size_t n);
/// n(2n - 1)
std::size_t jordan_dimension(std::size_t n);

/// Matrix of L_u (Jordan multiplication by u) in the basis.
Matrix L_operator(const HermElement& u, const JordanBasis& basis);
/// Matrix of S_uv = [L_u, L_v] + L_{u o v} in the basis.
Matrix S_operator(const HermElement& u, const HermElement& v, const JordanBasis& basis);

}  // namespace sp1kepler
