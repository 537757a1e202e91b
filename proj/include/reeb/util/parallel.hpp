#pragma once

#include <cstddef>
#include <exception>
#include <functional>
#include <vector>

namespace reeb::util {

/// Worker count: hardware concurrency capped by REEB_THREADS when set.
unsigned thread_count();

/// Runs fn(i) for i in [0, n). Results must be written to per-index slots
/// so reductions done afterwards keep a fixed order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& fn) {
  std::vector<T> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

} // namespace reeb::util
