#include "weylap/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace weylap {

namespace {

std::atomic<unsigned> g_workers{1};
thread_local bool t_in_region = false;

constexpr std::size_t kMinChunk = 64;

}  // namespace

void set_worker_count(unsigned n) { g_workers.store(std::max(1u, n)); }

unsigned worker_count() { return g_workers.load(); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const unsigned workers = worker_count();
  if (workers <= 1 || t_in_region || n < 2 * kMinChunk) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t threads =
      std::min<std::size_t>(workers, (n + kMinChunk - 1) / kMinChunk);
  const std::size_t chunk = (n + threads - 1) / threads;

  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      t_in_region = true;
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
      t_in_region = false;
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace weylap
