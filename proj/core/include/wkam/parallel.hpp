#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace wkam {

/// Worker cap for row-parallel loops. Results never depend on the value:
/// every output row is computed by exactly one worker in a fixed order.
struct Exec {
  unsigned threads = 1;
};

/// Runs fn(i) for i in [0, count) over contiguous chunks. If workers throw,
/// the exception of the lowest chunk is rethrown after all workers joined.
template <class Fn>
void parallel_for(std::size_t count, Exec exec, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(std::max(1u, exec.threads), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(count, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([lo, hi, w, &fn, &errors] {
        try {
          for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace wkam
