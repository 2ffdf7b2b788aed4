#pragma once

#include <cstddef>
#include <functional>

namespace twistlab {

// Worker count: TWISTLAB_THREADS if set (>= 1), otherwise hardware concurrency.
int thread_count();

// Runs body(i) for i in [0, n) over statically chunked contiguous ranges.
// Each index is visited exactly once; the chunking depends only on n and the
// thread count, so per-index results are independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

// Same, but hands each worker its contiguous range [begin, end).
void parallel_ranges(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

} // namespace twistlab
