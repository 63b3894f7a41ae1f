#include "sp1kepler/dense.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sp1kepler/simd/kernels.hpp"

namespace sp1kepler {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::set_zero() { std::fill(data_.begin(), data_.end(), 0.0); }

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "Matrix +=");
  simd::kernels().axpy(1.0, o.data(), data(), data_.size());
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "Matrix -=");
  simd::kernels().axpy(-1.0, o.data(), data(), data_.size());
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (auto& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix *: inner dimension mismatch");
  Matrix c(a.rows(), b.cols());
  simd::kernels().gemm_acc(a.rows(), b.cols(), a.cols(), 1.0, a.data(), a.cols(), b.data(), b.cols(), c.data(),
                           c.cols());
  return c;
}

Matrix commutator(const Matrix& a, const Matrix& b) {
  if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows()) {
    throw std::invalid_argument("commutator: operands must be square of equal size");
  }
  const std::size_t n = a.rows();
  Matrix c(n, n);
  const auto& k = simd::kernels();
  k.gemm_acc(n, n, n, 1.0, a.data(), n, b.data(), n, c.data(), n);
  k.gemm_acc(n, n, n, -1.0, b.data(), n, a.data(), n, c.data(), n);
  return c;
}

std::vector<double> operator*(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("Matrix * vector: dimension mismatch");
  std::vector<double> y(a.rows());
  const auto& k = simd::kernels();
  for (std::size_t r = 0; r < a.rows(); ++r) y[r] = k.dot(a.data() + r * a.cols(), x.data(), a.cols());
  return y;
}

std::vector<double> transpose_apply(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw std::invalid_argument("transpose_apply: dimension mismatch");
  std::vector<double> y(a.cols(), 0.0);
  const auto& k = simd::kernels();
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (x[r] != 0.0) k.axpy(x[r], a.data() + r * a.cols(), y.data(), a.cols());
  }
  return y;
}

double frobenius(const Matrix& a) {
  return std::sqrt(simd::kernels().dot(a.data(), a.data(), a.rows() * a.cols()));
}

double frobenius_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_diff");
  return std::sqrt(simd::kernels().sq_dist(a.data(), b.data(), a.rows() * a.cols()));
}

}  // namespace sp1kepler
