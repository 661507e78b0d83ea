#pragma once

#include <cstddef>
#include <functional>

namespace virtimu {

/// Worker cap: VIRTIMU_THREADS env var when set (>=1), else hardware
/// concurrency. Never exceeds n_tasks.
std::size_t effective_threads(std::size_t n_tasks);

/// Runs fn(i) for i in [0, n) across worker threads with static chunking.
/// Callers must make fn(i) write only to slot i of preallocated storage so
/// the result is independent of the worker count. Nested calls run serially
/// on the calling worker. The first exception thrown by any fn is rethrown
/// after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace virtimu
