#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace alab {

/// Worker count from ALAB_THREADS, else the hardware concurrency (>= 1).
unsigned default_thread_count();

/// Runs task(i) for i in [0, n) on `threads` workers (0 = default). Results
/// are returned in index order, so reductions over them are schedule
/// independent. If any task throws, the exception of the lowest failing index
/// is rethrown after all workers stop.
template <class T>
std::vector<T> parallel_map(std::int64_t n, unsigned threads,
                            const std::function<T(std::int64_t)>& task);

void parallel_for(std::int64_t n, unsigned threads, const std::function<void(std::int64_t)>& task);

template <class T>
std::vector<T> parallel_map(std::int64_t n, unsigned threads,
                            const std::function<T(std::int64_t)>& task) {
  std::vector<std::optional<T>> slots(static_cast<std::size_t>(n));
  parallel_for(n, threads, [&](std::int64_t i) { slots[static_cast<std::size_t>(i)] = task(i); });
  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace alab
