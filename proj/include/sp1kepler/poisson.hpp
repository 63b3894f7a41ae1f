#pragma once

// Canonical Poisson structure on T*H^n_* = R^{8n}.
//
// Flattened coordinates z = (q, p): q holds the components of Z, p those of W,
// each quaternion expanded as (w, x, y, z) in entry order. The sign convention
// is {q_i, p_j} = delta_ij, so that {<U,Z>, <V,W>} = <U,V>. In matrix form
// {f, g} = grad f^T J grad g with J = [[0, I], [-I, 0]].

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "sp1kepler/dense.hpp"
#include "sp1kepler/quaternion.hpp"

namespace sp1kepler {

/// Lower bound on |Z|: the phase space excludes Z = 0.
inline constexpr double kDomainEps = 1e-9;

struct PhasePoint {
  QVector Z;
  QVector W;

  PhasePoint() = default;
  /// Throws std::domain_error when |Z| <= kDomainEps, std::invalid_argument on length mismatch.
  PhasePoint(QVector z, QVector w);

  std::size_t order() const { return Z.size(); }
};

std::vector<double> flatten(const PhasePoint& p);
PhasePoint unflatten(std::span<const double> z);

/// f(z) = 1/2 z^T A z + b^T z + c on R^{8n}, A symmetric.
class QuadObservable {
 public:
  QuadObservable() = default;
  /// Zero observable of order n.
  explicit QuadObservable(std::size_t n);
  /// A is symmetrized.
  QuadObservable(std::size_t n, Matrix a, std::vector<double> b, double c);

  std::size_t order() const { return n_; }
  std::size_t dim() const { return 8 * n_; }
  const Matrix& A() const { return a_; }
  const std::vector<double>& b() const { return b_; }
  double c() const { return c_; }

  /// Nonzero pattern of the 4n x 4n blocks: qq, qp, pq, pp.
  const std::array<bool, 4>& blocks() const { return blocks_; }

  /// Frobenius norm of (A, b, c).
  double norm() const;

  QuadObservable& operator+=(const QuadObservable& o);
  QuadObservable& operator-=(const QuadObservable& o);
  QuadObservable& operator*=(double s);

  // Raw access for the bracket engine; call refresh() after writing.
  Matrix& mutable_A() { return a_; }
  std::vector<double>& mutable_b() { return b_; }
  void set_c(double c) { c_ = c; }
  void refresh();

 private:
  std::size_t n_ = 0;
  Matrix a_;
  std::vector<double> b_;
  double c_ = 0.0;
  std::array<bool, 4> blocks_{};
};

QuadObservable operator+(QuadObservable a, const QuadObservable& b);
QuadObservable operator-(QuadObservable a, const QuadObservable& b);
QuadObservable operator*(QuadObservable a, double s);
QuadObservable operator*(double s, QuadObservable a);

/// Frobenius norm of the difference of (A, b, c).
double distance(const QuadObservable& f, const QuadObservable& g);

double evaluate(const QuadObservable& f, const PhasePoint& p);
double evaluate(const QuadObservable& f, std::span<const double> z);

/// Exact canonical bracket of affine-quadratic observables:
/// A' = AJB - BJA, b' = AJb_g - BJb_f, c' = b_f^T J b_g.
QuadObservable bracket_exact(const QuadObservable& f, const QuadObservable& g);
/// Same, writing into out (reshaped as needed).
void bracket_exact_into(const QuadObservable& f, const QuadObservable& g, QuadObservable& out);

/// <U, Z> and <V, W> as linear observables.
QuadObservable linear_position(const QVector& u);
QuadObservable linear_momentum(const QVector& v);
QuadObservable constant_observable(std::size_t n, double c);

using SmoothObservable = std::function<double(std::span<const double>)>;

SmoothObservable as_function(const QuadObservable& f);

struct NumericBracketOptions {
  double h = 1e-5;
  /// Relative disagreement between step h and h/2 gradients that triggers
  /// Richardson extrapolation.
  double fallback_tol = 1e-8;
};

/// Central-difference gradient in flattened coordinates.
std::vector<double> numeric_gradient(const SmoothObservable& f, std::span<const double> z, double h);

/// sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i) by central differences.
/// Throws std::invalid_argument on step underflow, std::domain_error when |Z| < kDomainEps.
double bracket_numeric(const SmoothObservable& f, const SmoothObservable& g, const PhasePoint& p,
                       const NumericBracketOptions& options = {});

}  // namespace sp1kepler
