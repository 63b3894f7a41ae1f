#include "sp1kepler/quaternion.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace sp1kepler {

namespace {

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

Quaternion inverse(const Quaternion& q) {
  const double n2 = norm2(q);
  if (n2 == 0.0) {
    throw std::domain_error("inverse: zero quaternion");
  }
  return conj(q) * (1.0 / n2);
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
  return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

QVector& QVector::operator+=(const QVector& o) {
  require_same_size(size(), o.size(), "QVector +=");
  for (std::size_t a = 0; a < size(); ++a) entries_[a] += o.entries_[a];
  return *this;
}

QVector& QVector::operator-=(const QVector& o) {
  require_same_size(size(), o.size(), "QVector -=");
  for (std::size_t a = 0; a < size(); ++a) entries_[a] -= o.entries_[a];
  return *this;
}

QVector& QVector::operator*=(double s) {
  for (auto& q : entries_) q *= s;
  return *this;
}

QVector operator+(QVector a, const QVector& b) { return a += b; }
QVector operator-(QVector a, const QVector& b) { return a -= b; }
QVector operator*(QVector a, double s) { return a *= s; }
QVector operator*(double s, QVector a) { return a *= s; }

QVector operator*(const QVector& v, const Quaternion& q) {
  QVector out(v.size());
  for (std::size_t a = 0; a < v.size(); ++a) out[a] = v[a] * q;
  return out;
}

double vec_inner(const QVector& u, const QVector& v) {
  require_same_size(u.size(), v.size(), "vec_inner");
  double s = 0.0;
  for (std::size_t a = 0; a < u.size(); ++a) s += dot(u[a], v[a]);
  return s;
}

Quaternion dagger_product(const QVector& w, const QVector& z) {
  require_same_size(w.size(), z.size(), "dagger_product");
  Quaternion s;
  for (std::size_t a = 0; a < w.size(); ++a) s += conj(w[a]) * z[a];
  return s;
}

double norm2(const QVector& v) {
  double s = 0.0;
  for (const auto& q : v.entries()) s += norm2(q);
  return s;
}

double norm(const QVector& v) { return std::sqrt(norm2(v)); }

QMatrix QMatrix::identity(std::size_t n) {
  QMatrix m(n);
  for (std::size_t a = 0; a < n; ++a) m(a, a) = Quaternion::one();
  return m;
}

QMatrix QMatrix::unit(std::size_t n, std::size_t a, std::size_t b, const Quaternion& q) {
  if (a >= n || b >= n) throw std::out_of_range("QMatrix::unit: index out of range");
  QMatrix m(n);
  m(a, b) = q;
  return m;
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  require_same_size(n_, o.n_, "QMatrix +=");
  for (std::size_t e = 0; e < entries_.size(); ++e) entries_[e] += o.entries_[e];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  require_same_size(n_, o.n_, "QMatrix -=");
  for (std::size_t e = 0; e < entries_.size(); ++e) entries_[e] -= o.entries_[e];
  return *this;
}

QMatrix& QMatrix::operator*=(double s) {
  for (auto& q : entries_) q *= s;
  return *this;
}

QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
QMatrix operator*(QMatrix a, double s) { return a *= s; }
QMatrix operator*(double s, QMatrix a) { return a *= s; }

QVector mat_apply(const QMatrix& u, const QVector& z) {
  require_same_size(u.order(), z.size(), "mat_apply");
  const std::size_t n = u.order();
  QVector out(n);
  for (std::size_t a = 0; a < n; ++a) {
    Quaternion s;
    for (std::size_t b = 0; b < n; ++b) s += u(a, b) * z[b];
    out[a] = s;
  }
  return out;
}

void mat_mul_into(const QMatrix& u, const QMatrix& v, QMatrix& out) {
  require_same_size(u.order(), v.order(), "mat_mul");
  const std::size_t n = u.order();
  if (out.order() != n) out = QMatrix(n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      Quaternion s;
      for (std::size_t c = 0; c < n; ++c) s += u(a, c) * v(c, b);
      out(a, b) = s;
    }
  }
}

QMatrix mat_mul(const QMatrix& u, const QMatrix& v) {
  QMatrix out(u.order());
  mat_mul_into(u, v, out);
  return out;
}

QMatrix mat_dagger(const QMatrix& u) {
  const std::size_t n = u.order();
  QMatrix out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out(b, a) = conj(u(a, b));
  return out;
}

double trace_re(const QMatrix& u) {
  double s = 0.0;
  for (std::size_t a = 0; a < u.order(); ++a) s += u(a, a).w;
  return s;
}

QMatrix outer(const QVector& z, const QVector& w) {
  require_same_size(z.size(), w.size(), "outer");
  const std::size_t n = z.size();
  QMatrix out(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out(a, b) = z[a] * conj(w[b]);
  return out;
}

double max_abs_diff(const QMatrix& a, const QMatrix& b) {
  require_same_size(a.order(), b.order(), "max_abs_diff");
  double m = 0.0;
  for (std::size_t e = 0; e < a.entries().size(); ++e) m = std::max(m, norm(a.entries()[e] - b.entries()[e]));
  return m;
}

double frobenius(const QMatrix& u) {
  double s = 0.0;
  for (const auto& q : u.entries()) s += norm2(q);
  return std::sqrt(s);
}

}  // namespace sp1kepler
