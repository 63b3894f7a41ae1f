#pragma once

// Quaternions, quaternionic column vectors and square quaternionic matrices.
//
// Conventions: i*j = k, components stored as (w, x, y, z) along (1, i, j, k).
// H^n is treated as a right H-module, so scalars act from the right:
// (Z * q)_a = Z_a * q.

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace sp1kepler {

struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
  constexpr explicit Quaternion(double real) : w(real) {}

  static constexpr Quaternion one() { return {1, 0, 0, 0}; }
  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }
  /// Unit along 1, i, j, k for index 0..3.
  static constexpr Quaternion unit(int index) {
    Quaternion q;
    q[index] = 1.0;
    return q;
  }

  constexpr double operator[](int c) const {
    switch (c) {
      case 0: return w;
      case 1: return x;
      case 2: return y;
      default: return z;
    }
  }
  constexpr double& operator[](int c) {
    switch (c) {
      case 0: return w;
      case 1: return x;
      case 2: return y;
      default: return z;
    }
  }

  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  constexpr Quaternion& operator*=(double s) {
    w *= s; x *= s; y *= s; z *= s;
    return *this;
  }

  friend constexpr bool operator==(const Quaternion&, const Quaternion&) = default;
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator-(const Quaternion& a) { return {-a.w, -a.x, -a.y, -a.z}; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }

/// Hamilton product.
constexpr Quaternion qmul(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}
constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return qmul(a, b); }

constexpr Quaternion conj(const Quaternion& q) { return {q.w, -q.x, -q.y, -q.z}; }
constexpr double re(const Quaternion& q) { return q.w; }
constexpr Quaternion im(const Quaternion& q) { return {0.0, q.x, q.y, q.z}; }
constexpr double norm2(const Quaternion& q) { return q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z; }
inline double norm(const Quaternion& q) { return std::sqrt(norm2(q)); }
/// Euclidean inner product on H = R^4, equal to Re(conj(a) b).
constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}
Quaternion inverse(const Quaternion& q);

std::ostream& operator<<(std::ostream& os, const Quaternion& q);

/// Column vector in H^n.
class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : entries_(n) {}
  QVector(std::initializer_list<Quaternion> entries) : entries_(entries) {}
  explicit QVector(std::vector<Quaternion> entries) : entries_(std::move(entries)) {}

  std::size_t size() const { return entries_.size(); }
  const Quaternion& operator[](std::size_t a) const { return entries_[a]; }
  Quaternion& operator[](std::size_t a) { return entries_[a]; }
  const std::vector<Quaternion>& entries() const { return entries_; }

  QVector& operator+=(const QVector& o);
  QVector& operator-=(const QVector& o);
  QVector& operator*=(double s);

  friend bool operator==(const QVector&, const QVector&) = default;

 private:
  std::vector<Quaternion> entries_;
};

QVector operator+(QVector a, const QVector& b);
QVector operator-(QVector a, const QVector& b);
QVector operator*(QVector a, double s);
QVector operator*(double s, QVector a);
/// Right scalar action Z * q.
QVector operator*(const QVector& v, const Quaternion& q);

/// Re(U^dagger V).
double vec_inner(const QVector& u, const QVector& v);
/// W^dagger Z = sum_a conj(W_a) Z_a.
Quaternion dagger_product(const QVector& w, const QVector& z);
double norm2(const QVector& v);
double norm(const QVector& v);

/// Square n x n quaternionic matrix, row-major.
class QMatrix {
 public:
  QMatrix() = default;
  explicit QMatrix(std::size_t n) : n_(n), entries_(n * n) {}

  static QMatrix identity(std::size_t n);
  /// E_ab * q (single nonzero entry).
  static QMatrix unit(std::size_t n, std::size_t a, std::size_t b, const Quaternion& q = Quaternion::one());

  std::size_t order() const { return n_; }
  const Quaternion& operator()(std::size_t a, std::size_t b) const { return entries_[a * n_ + b]; }
  Quaternion& operator()(std::size_t a, std::size_t b) { return entries_[a * n_ + b]; }
  const std::vector<Quaternion>& entries() const { return entries_; }

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(double s);

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Quaternion> entries_;
};

QMatrix operator+(QMatrix a, const QMatrix& b);
QMatrix operator-(QMatrix a, const QMatrix& b);
QMatrix operator*(QMatrix a, double s);
QMatrix operator*(double s, QMatrix a);

QVector mat_apply(const QMatrix& u, const QVector& z);
QMatrix mat_mul(const QMatrix& u, const QMatrix& v);
/// Writes u*v into out (resized as needed); out must not alias u or v.
void mat_mul_into(const QMatrix& u, const QMatrix& v, QMatrix& out);
QMatrix mat_dagger(const QMatrix& u);
/// Re tr(u).
double trace_re(const QMatrix& u);
/// Z W^dagger.
QMatrix outer(const QVector& z, const QVector& w);
/// Largest entrywise quaternion norm of a - b.
double max_abs_diff(const QMatrix& a, const QMatrix& b);
double frobenius(const QMatrix& u);

}  // namespace sp1kepler
