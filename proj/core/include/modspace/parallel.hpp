#pragma once

#include <cstddef>
#include <functional>

namespace modspace {

/// Number of worker threads: MODSPACE_THREADS if set, hardware otherwise.
int thread_count();

/// Runs body(i) for i in [begin, end). Work is split into contiguous
/// chunks, one per worker; bodies must write to disjoint state. Reductions
/// belong to the caller so that result order (and bits) never depend on
/// the thread count.
void parallel_for(std::size_t begin, std::size_t end,
                  const std::function<void(std::size_t)>& body);

}  // namespace modspace
