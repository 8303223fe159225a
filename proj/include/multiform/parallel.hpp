#pragma once

#include <cstddef>
#include <functional>

namespace multiform {

// Worker cap: min(hardware_concurrency, MULTIFORM_THREADS if set).
unsigned worker_count();

// Runs fn(i) for i in [0, n). Results must be written to caller-owned slots
// indexed by i so the outcome is identical for any worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace multiform
