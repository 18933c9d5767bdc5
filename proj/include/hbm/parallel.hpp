// Minimal fork-join loop over an index range.  Results must be written to
// per-index slots so the outcome never depends on scheduling.
#pragma once

#include <cstddef>
#include <functional>

namespace hbm {

/// Worker count: HBM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
unsigned thread_count();

/// Calls body(i) for i in [0, n) on up to thread_count() threads.  The first
/// exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hbm
