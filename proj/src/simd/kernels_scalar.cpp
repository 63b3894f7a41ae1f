#include "sp1kepler/simd/kernels.hpp"

namespace sp1kepler::simd {

namespace {

void gemm_acc_scalar(std::size_t m, std::size_t n, std::size_t k, double alpha, const double* a, std::size_t lda,
                     const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * ldc;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = alpha * a[i * lda + p];
      if (aip == 0.0) continue;
      const double* brow = b + p * ldb;
      for (std::size_t j = 0; j < n; ++j) crow[j] += aip * brow[j];
    }
  }
}

double dot_scalar(const double* a, const double* b, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) y[i] += alpha * x[i];
}

double sq_dist_scalar(const double* a, const double* b, std::size_t len) {
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

constexpr KernelTable kScalar{Isa::scalar, "scalar", gemm_acc_scalar, dot_scalar, axpy_scalar, sq_dist_scalar};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

}  // namespace sp1kepler::simd
