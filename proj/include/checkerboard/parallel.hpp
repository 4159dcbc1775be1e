#pragma once

#include <cstddef>
#include <functional>

namespace checkerboard {

// Worker cap from CHECKERBOARD_THREADS; 0 or unset means hardware concurrency.
int thread_cap();

// Static range split over the capped worker count. Chunks are contiguous and
// each index is visited exactly once, so per-index writes are schedule-free.
// min_parallel keeps cheap loops serial; pass a small value when each index
// carries a full row of work.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body,
                  std::size_t min_parallel = 16384);

}  // namespace checkerboard
