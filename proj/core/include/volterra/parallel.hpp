#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace volterra {

/// Upper bound on worker threads used by parallelFor. 0 means hardware concurrency.
void setMaxThreads(int threads);
int maxThreads();

namespace detail {
/// Set on pool workers so nested parallelFor calls run inline.
inline thread_local bool insideParallelRegion = false;
}  // namespace detail

/// Runs body(i) for i in [0, count) over a static partition. Each index is
/// visited exactly once; callers write results into per-index slots, so
/// reductions performed afterwards in index order are bit-reproducible.
template <class Body>
void parallelFor(std::size_t count, Body&& body) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, maxThreads())), count);
  if (workers <= 1 || detail::insideParallelRegion) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failureMutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      detail::insideParallelRegion = true;
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        std::lock_guard lock(failureMutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace volterra
