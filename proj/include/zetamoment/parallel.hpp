#pragma once

#include <cstddef>
#include <functional>

namespace zm {

// Number of worker threads to use: a positive request is taken as-is,
// zero or negative means hardware concurrency.
unsigned resolve_threads(int requested);

// Run `work(b)` for b = 0..n_blocks-1 on up to `threads` workers. Blocks are
// claimed dynamically, so completion order is arbitrary; callers must write
// block results into pre-sized storage indexed by b and fold sequentially
// afterwards. That fixed decomposition plus an ordered fold is what makes
// results byte-identical for every thread count. The first exception thrown
// by any worker is rethrown here after all workers have stopped.
void parallel_for_blocks(std::size_t n_blocks, unsigned threads,
                         const std::function<void(std::size_t)>& work);

}  // namespace zm
