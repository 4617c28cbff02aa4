#pragma once
#include <cstddef>
#include <functional>

namespace slitfano {

// Worker count: SLITFANO_THREADS if set, else `requested` if positive, else the hardware count.
int thread_count(int requested = 0);

// Runs fn(0..n-1) on up to `threads` workers. Results must be written by index; the first exception
// in index order is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn, int threads = 0);

} // namespace slitfano
