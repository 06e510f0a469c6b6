#pragma once

#include <cstddef>
#include <functional>

namespace obm {

/// Worker count: THRESHOLD_DIFFUSION_THREADS if set and > 0, otherwise the
/// hardware concurrency (at least 1).
unsigned default_thread_count();

/// Calls body(i) for i in [0, count). Work is split into contiguous blocks,
/// one per thread; `threads == 0` means default_thread_count(). The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace obm
