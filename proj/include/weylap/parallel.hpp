#pragma once

#include <cstddef>
#include <functional>

namespace weylap {

/// Number of worker threads used by data-parallel loops (default 1).
void set_worker_count(unsigned n);
unsigned worker_count();

/// Runs body(i) for i in [0, n). Iterations are statically partitioned and
/// each index is visited exactly once, so any computation that writes only
/// to slot i is bit-identical to the sequential loop. Nested calls run
/// sequentially on the calling worker.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace weylap
