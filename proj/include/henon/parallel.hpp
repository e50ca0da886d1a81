#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace henon {

/// Number of workers to use when the caller passes 0.
inline int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs body(k) for k in [0, count) on `workers` threads. Indices are split
/// into contiguous blocks, so each k is handled by exactly one worker and the
/// result never depends on the worker count as long as body(k) only writes
/// its own slot. The first exception thrown by any worker is rethrown.
template <class Body>
void parallel_for(int count, int workers, Body&& body) {
  if (count <= 0) return;
  if (workers <= 0) workers = default_workers();
  workers = std::min(workers, count);
  if (workers == 1) {
    for (int k = 0; k < count; ++k) body(k);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(static_cast<long long>(count) * w / workers);
    const int end = static_cast<int>(static_cast<long long>(count) * (w + 1) / workers);
    pool.emplace_back([&, begin, end] {
      try {
        for (int k = begin; k < end; ++k) body(k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace henon
