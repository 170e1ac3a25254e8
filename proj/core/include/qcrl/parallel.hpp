#pragma once

#include <cstddef>
#include <functional>

namespace qcrl {

/// Worker count: QCRL_THREADS if set and positive, else the hardware
/// concurrency (at least 1).
int default_thread_count();

/// Calls fn(i) for i in [0, n) on up to `threads` workers (0 = default).
/// Each index is processed exactly once; the first exception is rethrown
/// after all workers have stopped.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

}  // namespace qcrl
