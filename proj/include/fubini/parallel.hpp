#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace fubini {

// Number of worker threads (FUBINI_THREADS overrides hardware_concurrency).
unsigned worker_count();

// Runs task(i) for i in [0, count) across the worker pool. Tasks must write
// only to their own output slot; callers reduce the slots in index order so
// the result does not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task);

template <class T, class F>
std::vector<T> parallel_map(std::size_t count, F&& f) {
  std::vector<T> out(count);
  parallel_for(count, [&](std::size_t i) { out[i] = f(i); });
  return out;
}

}  // namespace fubini
