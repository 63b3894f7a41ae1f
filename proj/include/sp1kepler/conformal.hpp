#pragma once

// The conformal algebra co = V + str + V* of V = H_n(H), realized concretely:
// X and Y parts as coordinate vectors in a JordanBasis (V* identified with V
// through the inner product), the str part as an operator on V in the same
// basis. Brackets:
//
//   [S, X_z] = X_{S z}     [S, Y_w] = -Y_{S^T w}     [S, S'] = SS' - S'S
//   [X, X] = 0             [Y, Y] = 0                [X_u, Y_v] = -2 S_uv

#include <cstddef>
#include <span>
#include <vector>

#include "sp1kepler/dense.hpp"
#include "sp1kepler/jordan.hpp"

namespace sp1kepler {

struct ConformalElement {
  std::vector<double> x;  // X_z, coordinates of z
  Matrix s;               // element of str as an operator on V
  std::vector<double> y;  // Y_w, coordinates of w

  double norm() const;
};

class ConformalAlgebra {
 public:
  /// Drop tolerance used when orthonormalizing the S-span.
  static constexpr double kRankTol = 1e-10;

  explicit ConformalAlgebra(std::size_t n);

  std::size_t order() const { return basis_.order(); }
  std::size_t dim_v() const { return basis_.dim(); }
  std::size_t dim_str() const { return str_basis_.size(); }
  /// 2 dim V + dim str
  std::size_t dim() const { return 2 * dim_v() + dim_str(); }
  const JordanBasis& basis() const { return basis_; }

  /// S_operator(e_alpha, e_beta), cached.
  const Matrix& S_basis(std::size_t alpha, std::size_t beta) const { return s_table_[alpha * dim_v() + beta]; }
  /// S_uv for coordinate vectors u, v (bilinear in the cached table).
  Matrix S_of(std::span<const double> u, std::span<const double> v) const;

  ConformalElement zero() const;
  ConformalElement X(const HermElement& z) const;
  ConformalElement Y(const HermElement& w) const;
  ConformalElement S(const HermElement& u, const HermElement& v) const;
  ConformalElement X_basis(std::size_t alpha) const;
  ConformalElement Y_basis(std::size_t alpha) const;
  ConformalElement S_basis_element(std::size_t alpha, std::size_t beta) const;

  /// Orthonormal basis of str (as flattened dim V x dim V operators).
  const std::vector<std::vector<double>>& str_basis() const { return str_basis_; }
  /// Frobenius distance from s to its projection on str.
  double str_projection_residual(const Matrix& s) const;

  ConformalElement bracket(const ConformalElement& a, const ConformalElement& b) const;
  /// Same as bracket, reusing out's storage.
  void bracket_into(const ConformalElement& a, const ConformalElement& b, ConformalElement& out) const;

 private:
  void add_S_of(std::span<const double> u, std::span<const double> v, double scale, Matrix& out) const;

  JordanBasis basis_;
  std::vector<Matrix> s_table_;
  std::vector<std::vector<double>> str_basis_;
};

ConformalElement co_bracket(const ConformalAlgebra& algebra, const ConformalElement& a, const ConformalElement& b);

/// Largest component norm of [A,[B,C]] + [B,[C,A]] + [C,[A,B]].
double jacobi_residual(const ConformalAlgebra& algebra, const ConformalElement& a, const ConformalElement& b,
                       const ConformalElement& c);

/// 2 dim V + rank span{S(e_alpha, e_beta)}; equals 2n(4n - 1) = dim so*(4n) for n >= 2
/// (3 at n = 1, where co = sl(2, R)).
std::size_t co_dimension(std::size_t n);

/// The X_{e_alpha}, Y_{e_beta}, S(e_gamma, e_delta) generators in that order.
std::vector<ConformalElement> generators(const ConformalAlgebra& algebra);

struct JacobiSweep {
  std::size_t triples = 0;
  double max_residual = 0.0;
};

/// Jacobi residual over every unordered triple of distinct generators. The
/// cyclic sum is alternating, so this covers all ordered triples.
JacobiSweep jacobi_generator_sweep(const ConformalAlgebra& algebra);

}  // namespace sp1kepler
