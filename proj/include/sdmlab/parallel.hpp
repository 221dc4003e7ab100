#pragma once

#include <cstddef>
#include <functional>

namespace sdmlab {

/// Worker count: SDM_LAB_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Calls fn(i) for i in [0, count) on up to worker_count() threads. Each
/// index is processed exactly once; callers write results into slot i so
/// the outcome does not depend on scheduling. After all workers join, the
/// exception from the lowest failing index (if any) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace sdmlab
