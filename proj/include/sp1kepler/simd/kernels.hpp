#pragma once

// Dense double-precision kernels with a scalar reference implementation and
// ISA-specific variants. kernels() returns the table picked for this CPU on
// first use; the scalar table is always available for equivalence tests.
//
// Setting SP1KEPLER_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <string_view>
#include <vector>

namespace sp1kepler::simd {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  std::string_view name;

  /// C[m x n] += alpha * A[m x k] * B[k x n], row-major with leading dimensions.
  void (*gemm_acc)(std::size_t m, std::size_t n, std::size_t k, double alpha, const double* a, std::size_t lda,
                   const double* b, std::size_t ldb, double* c, std::size_t ldc);
  double (*dot)(const double* a, const double* b, std::size_t len);
  /// y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t len);
  /// sum (a_i - b_i)^2
  double (*sq_dist)(const double* a, const double* b, std::size_t len);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant was not compiled in.
const KernelTable* avx2_kernels();
bool cpu_supports(Isa isa);
/// Variants compiled in and usable on this CPU, scalar first.
std::vector<const KernelTable*> available_kernels();
const KernelTable& kernels();

}  // namespace sp1kepler::simd
