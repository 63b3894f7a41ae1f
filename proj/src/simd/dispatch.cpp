#include <cstdlib>
#include <string_view>

#include "sp1kepler/simd/kernels.hpp"

namespace sp1kepler::simd {

#if defined(SP1KEPLER_HAVE_AVX2)
const KernelTable* avx2_kernels_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(SP1KEPLER_HAVE_AVX2)
  return avx2_kernels_impl();
#else
  return nullptr;
#endif
}

bool cpu_supports(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(SP1KEPLER_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
  }
  return false;
}

std::vector<const KernelTable*> available_kernels() {
  std::vector<const KernelTable*> out{&scalar_kernels()};
  if (avx2_kernels() != nullptr && cpu_supports(Isa::avx2)) out.push_back(avx2_kernels());
  return out;
}

namespace {

const KernelTable& select() {
  const char* forced = std::getenv("SP1KEPLER_SIMD");
  if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
  if (avx2_kernels() != nullptr && cpu_supports(Isa::avx2)) return *avx2_kernels();
  return scalar_kernels();
}

}  // namespace

const KernelTable& kernels() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace sp1kepler::simd
