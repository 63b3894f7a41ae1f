// Compiled with -mavx2 -mfma; only reached through avx2_kernels() after the
// runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include "sp1kepler/simd/kernels.hpp"

namespace sp1kepler::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// 4 rows x 8 columns register block, accumulating over the full k range.
inline void block_4x8(std::size_t k, double alpha, const double* a, std::size_t lda, const double* b, std::size_t ldb,
                      double* c, std::size_t ldc) {
  __m256d c00 = _mm256_setzero_pd(), c01 = _mm256_setzero_pd();
  __m256d c10 = _mm256_setzero_pd(), c11 = _mm256_setzero_pd();
  __m256d c20 = _mm256_setzero_pd(), c21 = _mm256_setzero_pd();
  __m256d c30 = _mm256_setzero_pd(), c31 = _mm256_setzero_pd();
  for (std::size_t p = 0; p < k; ++p) {
    const __m256d b0 = _mm256_loadu_pd(b + p * ldb);
    const __m256d b1 = _mm256_loadu_pd(b + p * ldb + 4);
    __m256d av = _mm256_broadcast_sd(a + p);
    c00 = _mm256_fmadd_pd(av, b0, c00);
    c01 = _mm256_fmadd_pd(av, b1, c01);
    av = _mm256_broadcast_sd(a + lda + p);
    c10 = _mm256_fmadd_pd(av, b0, c10);
    c11 = _mm256_fmadd_pd(av, b1, c11);
    av = _mm256_broadcast_sd(a + 2 * lda + p);
    c20 = _mm256_fmadd_pd(av, b0, c20);
    c21 = _mm256_fmadd_pd(av, b1, c21);
    av = _mm256_broadcast_sd(a + 3 * lda + p);
    c30 = _mm256_fmadd_pd(av, b0, c30);
    c31 = _mm256_fmadd_pd(av, b1, c31);
  }
  const __m256d al = _mm256_set1_pd(alpha);
  double* r0 = c;
  double* r1 = c + ldc;
  double* r2 = c + 2 * ldc;
  double* r3 = c + 3 * ldc;
  _mm256_storeu_pd(r0, _mm256_fmadd_pd(al, c00, _mm256_loadu_pd(r0)));
  _mm256_storeu_pd(r0 + 4, _mm256_fmadd_pd(al, c01, _mm256_loadu_pd(r0 + 4)));
  _mm256_storeu_pd(r1, _mm256_fmadd_pd(al, c10, _mm256_loadu_pd(r1)));
  _mm256_storeu_pd(r1 + 4, _mm256_fmadd_pd(al, c11, _mm256_loadu_pd(r1 + 4)));
  _mm256_storeu_pd(r2, _mm256_fmadd_pd(al, c20, _mm256_loadu_pd(r2)));
  _mm256_storeu_pd(r2 + 4, _mm256_fmadd_pd(al, c21, _mm256_loadu_pd(r2 + 4)));
  _mm256_storeu_pd(r3, _mm256_fmadd_pd(al, c30, _mm256_loadu_pd(r3)));
  _mm256_storeu_pd(r3 + 4, _mm256_fmadd_pd(al, c31, _mm256_loadu_pd(r3 + 4)));
}

// One row, columns [j0, n): 4-wide vector body then scalar tail.
inline void row_tail(std::size_t j0, std::size_t n, std::size_t k, double alpha, const double* arow, const double* b,
                     std::size_t ldb, double* crow) {
  std::size_t j = j0;
  for (; j + 4 <= n; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t p = 0; p < k; ++p) {
      acc = _mm256_fmadd_pd(_mm256_broadcast_sd(arow + p), _mm256_loadu_pd(b + p * ldb + j), acc);
    }
    _mm256_storeu_pd(crow + j, _mm256_fmadd_pd(_mm256_set1_pd(alpha), acc, _mm256_loadu_pd(crow + j)));
  }
  for (; j < n; ++j) {
    double s = 0.0;
    for (std::size_t p = 0; p < k; ++p) s += arow[p] * b[p * ldb + j];
    crow[j] += alpha * s;
  }
}

void gemm_acc_avx2(std::size_t m, std::size_t n, std::size_t k, double alpha, const double* a, std::size_t lda,
                   const double* b, std::size_t ldb, double* c, std::size_t ldc) {
  const std::size_t n8 = n - n % 8;
  std::size_t i = 0;
  for (; i + 4 <= m; i += 4) {
    for (std::size_t j = 0; j < n8; j += 8) block_4x8(k, alpha, a + i * lda, lda, b + j, ldb, c + i * ldc + j, ldc);
    for (std::size_t r = 0; r < 4; ++r) row_tail(n8, n, k, alpha, a + (i + r) * lda, b, ldb, c + (i + r) * ldc);
  }
  for (; i < m; ++i) row_tail(0, n, k, alpha, a + i * lda, b, ldb, c + i * ldc);
}

double dot_avx2(const double* a, const double* b, std::size_t len) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= len; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) s += a[i] * b[i];
  return s;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t len) {
  const __m256d al = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(al, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  }
  for (; i < len; ++i) y[i] += alpha * x[i];
}

double sq_dist_avx2(const double* a, const double* b, std::size_t len) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

constexpr KernelTable kAvx2{Isa::avx2, "avx2", gemm_acc_avx2, dot_avx2, axpy_avx2, sq_dist_avx2};

}  // namespace

const KernelTable* avx2_kernels_impl() { return &kAvx2; }

}  // namespace sp1kepler::simd
