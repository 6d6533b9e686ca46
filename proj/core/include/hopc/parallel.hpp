#pragma once

#include <cstdint>
#include <functional>

namespace hopc {

/// Caps the number of worker threads used by parallel_for. 0 restores the
/// hardware default. Results never depend on this value: work items write
/// to disjoint slots and are merged in index order.
void set_max_threads(int n);

/// Current worker-thread cap.
int max_threads();

/// Runs fn(i) for every i in [begin, end), split into contiguous chunks
/// across worker threads. fn must only touch per-index state. Exceptions
/// from workers are rethrown on the calling thread.
void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn);

} // namespace hopc
