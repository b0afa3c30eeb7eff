#pragma once

#include <cstddef>
#include <functional>

namespace proxcor {

// Worker count: PROXCOR_THREADS if set and positive, else hardware concurrency.
unsigned thread_count();

// Runs body(begin, end) over [0, count) split into blocks of `block` indices.
// Blocks are claimed dynamically; callers must make results independent of
// which thread ran which block.
void parallel_blocks(std::size_t count, std::size_t block,
                     const std::function<void(std::size_t, std::size_t)>& body);

} // namespace proxcor
