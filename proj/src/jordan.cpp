#include "sp1kepler/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sp1kepler {

namespace {

void require_same_order(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": order mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

double hermitian_drift(const QMatrix& m) {
  double drift = 0.0;
  const std::size_t n = m.order();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) drift = std::max(drift, norm(m(a, b) - conj(m(b, a))));
  return drift;
}

}  // namespace

HermElement::HermElement(QMatrix mat) : mat_(std::move(mat)) {
  const double scale = std::max(1.0, frobenius(mat_));
  const double drift = hermitian_drift(mat_) / scale;
  if (drift > kRejectTol) {
    throw std::invalid_argument("HermElement: matrix is not hermitian (relative drift " + std::to_string(drift) + ")");
  }
  if (drift > kSymmetrizeTol) mat_ = hermitian_part(mat_).mat_;
}

HermElement hermitian_part(const QMatrix& m) {
  QMatrix h = m;
  const std::size_t n = m.order();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) {
      const Quaternion s = (m(a, b) + conj(m(b, a))) * 0.5;
      h(a, b) = s;
      h(b, a) = conj(s);
    }
  }
  return HermElement(std::move(h), HermElement::Unchecked{});
}

HermElement HermElement::identity(std::size_t n) { return HermElement(QMatrix::identity(n), Unchecked{}); }
HermElement HermElement::zero(std::size_t n) { return HermElement(QMatrix(n), Unchecked{}); }

HermElement& HermElement::operator+=(const HermElement& o) {
  mat_ += o.mat_;
  return *this;
}
HermElement& HermElement::operator-=(const HermElement& o) {
  mat_ -= o.mat_;
  return *this;
}
HermElement& HermElement::operator*=(double s) {
  mat_ *= s;
  return *this;
}

HermElement operator+(HermElement a, const HermElement& b) { return a += b; }
HermElement operator-(HermElement a, const HermElement& b) { return a -= b; }
HermElement operator*(HermElement a, double s) { return a *= s; }
HermElement operator*(double s, HermElement a) { return a *= s; }

HermElement jordan_product(const HermElement& u, const HermElement& v) {
  require_same_order(u.order(), v.order(), "jordan_product");
  QMatrix uv = mat_mul(u.mat(), v.mat());
  uv += mat_mul(v.mat(), u.mat());
  uv *= 0.5;
  return hermitian_part(uv);
}

HermElement triple_product(const HermElement& u, const HermElement& v, const HermElement& z) {
  require_same_order(u.order(), v.order(), "triple_product");
  require_same_order(u.order(), z.order(), "triple_product");
  QMatrix t = mat_mul(mat_mul(u.mat(), v.mat()), z.mat());
  t += mat_mul(mat_mul(z.mat(), v.mat()), u.mat());
  t *= 0.5;
  return hermitian_part(t);
}

double inner(const HermElement& u, const HermElement& v) {
  require_same_order(u.order(), v.order(), "inner");
  const std::size_t n = u.order();
  double s = 0.0;
  // Re tr(uv) = sum_ab Re(u_ab v_ba)
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) s += dot(conj(u.mat()(a, b)), v.mat()(b, a));
  return s / static_cast<double>(n);
}

std::size_t jordan_dimension(std::size_t n) { return n * (2 * n - 1); }

JordanBasis::JordanBasis(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("JordanBasis: order must be >= 1");
  elements_.reserve(jordan_dimension(n));
  const double diag = std::sqrt(static_cast<double>(n));
  for (std::size_t a = 0; a < n; ++a) {
    elements_.push_back(HermElement(QMatrix::unit(n, a, a, Quaternion(diag))));
  }
  const double off = std::sqrt(static_cast<double>(n) / 2.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      for (int q = 0; q < 4; ++q) {
        const Quaternion unit = Quaternion::unit(q) * off;
        QMatrix m(n);
        m(a, b) = unit;
        m(b, a) = conj(unit);
        elements_.push_back(HermElement(std::move(m)));
      }
    }
  }
}

std::vector<double> JordanBasis::coords(const HermElement& u) const {
  require_same_order(n_, u.order(), "JordanBasis::coords");
  std::vector<double> c(dim());
  for (std::size_t alpha = 0; alpha < dim(); ++alpha) c[alpha] = inner(elements_[alpha], u);
  return c;
}

HermElement JordanBasis::element(std::span<const double> coords) const {
  if (coords.size() != dim()) throw std::invalid_argument("JordanBasis::element: coordinate count mismatch");
  HermElement u = HermElement::zero(n_);
  for (std::size_t alpha = 0; alpha < dim(); ++alpha) {
    if (coords[alpha] != 0.0) u += elements_[alpha] * coords[alpha];
  }
  return u;
}

JordanBasis orthonormal_basis(std::size_t n) { return JordanBasis(n); }

Matrix L_operator(const HermElement& u, const JordanBasis& basis) {
  require_same_order(u.order(), basis.order(), "L_operator");
  const std::size_t d = basis.dim();
  Matrix m(d, d);
  for (std::size_t beta = 0; beta < d; ++beta) {
    const auto col = basis.coords(jordan_product(u, basis[beta]));
    for (std::size_t alpha = 0; alpha < d; ++alpha) m(alpha, beta) = col[alpha];
  }
  return m;
}

Matrix S_operator(const HermElement& u, const HermElement& v, const JordanBasis& basis) {
  require_same_order(u.order(), v.order(), "S_operator");
  const Matrix lu = L_operator(u, basis);
  const Matrix lv = L_operator(v, basis);
  return commutator(lu, lv) + L_operator(jordan_product(u, v), basis);
}

}  // namespace sp1kepler
