#pragma once

#include <cstddef>
#include <functional>

namespace holo {

/// Worker count: HOLOBENCH_THREADS when set to a positive integer, else the
/// hardware concurrency (at least 1).
std::size_t thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. Iterations
/// are split into contiguous chunks; the first exception is rethrown after
/// all workers join. Results must not depend on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace holo
