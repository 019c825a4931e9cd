#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace lipaging {

/// Worker count to use when the caller asks for `requested` (0 = hardware).
inline std::size_t resolve_threads(std::size_t requested, std::size_t tasks) {
  std::size_t n = requested;
  if (n == 0) n = std::max<unsigned>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, tasks));
}

/**
 * Runs body(i) for i in [0, count) across `threads` workers.  Indices are
 * claimed dynamically; callers write results into index-addressed slots so
 * the outcome does not depend on scheduling.  The first exception thrown by
 * any task is rethrown on the calling thread.
 */
template <typename Body>
void parallel_for(std::size_t count, std::size_t threads, Body&& body) {
  const std::size_t workers = resolve_threads(threads, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace lipaging
