#pragma once

// Minimal fork-join helpers for verification sweeps. Work is split into
// contiguous chunks, one per worker; reductions are order-independent (max,
// or per-index slots) so results do not depend on the worker count.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace sp1kepler {

/// Worker count: hardware concurrency, capped by HAMILTON_SP1_THREADS when set.
std::size_t worker_count();

/// body(begin, end) over a partition of [0, count).
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t chunk = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = std::min(count, w * chunk);
    const std::size_t end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end] {
      try {
        body(begin, end);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

/// max over i of fn(i); 0 for an empty range.
template <class Fn>
double parallel_max(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_count(), std::max<std::size_t>(count, 1));
  std::vector<double> partial(workers, 0.0);
  const std::size_t chunk = (count + workers - 1) / workers;
  parallel_for(workers, [&](std::size_t wb, std::size_t we) {
    for (std::size_t w = wb; w < we; ++w) {
      double m = 0.0;
      const std::size_t end = std::min(count, (w + 1) * chunk);
      for (std::size_t i = w * chunk; i < end; ++i) m = std::max(m, fn(i));
      partial[w] = m;
    }
  });
  return *std::max_element(partial.begin(), partial.end());
}

}  // namespace sp1kepler
