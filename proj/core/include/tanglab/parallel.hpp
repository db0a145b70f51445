#pragma once

#include <cstddef>
#include <functional>

namespace tanglab {

// Worker count used by point-parallel loops; 0 restores the hardware default.
void set_worker_count(unsigned n);
unsigned worker_count();

// Runs body(i) for i in [0, n) in contiguous static chunks. Each index is
// visited exactly once, so per-index results are independent of the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace tanglab
