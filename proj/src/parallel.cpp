#include "sp1kepler/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sp1kepler {

std::size_t worker_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("HAMILTON_SP1_THREADS")) {
    try {
      const long v = std::stol(cap);
      if (v >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      // unparsable cap is ignored
    }
  }
  return n;
}

}  // namespace sp1kepler
