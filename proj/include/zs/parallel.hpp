#pragma once

#include <cstddef>
#include <functional>

namespace zs {

// Worker count: hardware concurrency capped by ZS_SPECTRA_THREADS when set.
unsigned worker_count();

// Runs fn(i) for i in [0, n) on up to worker_count() threads. Each index is
// processed exactly once; the first exception thrown is rethrown on the caller.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace zs
