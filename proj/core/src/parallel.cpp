#include "volterra/parallel.hpp"

#include <atomic>

namespace volterra {

namespace {
std::atomic<int> gMaxThreads{1};
}

void setMaxThreads(int threads) {
  if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  gMaxThreads.store(threads);
}

int maxThreads() { return gMaxThreads.load(); }

}  // namespace volterra
