#pragma once

#include <cstddef>
#include <functional>

namespace holoflow {

/// Worker count: HOLOFLOW_THREADS if set and positive, otherwise the
/// hardware concurrency.
unsigned thread_count();

/// Runs body(i) for i in [0, count) on up to thread_count() threads. Each
/// index is visited exactly once; the first exception thrown is rethrown
/// on the calling thread after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace holoflow
