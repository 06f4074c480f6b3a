#pragma once

#include <cstddef>
#include <functional>

namespace drex {

// Caps the worker count used by parallel_for. 0 means hardware concurrency.
// Results never depend on the value; it only limits resource use.
void set_max_threads(unsigned n);
unsigned max_threads();

// Runs fn(i) for every i in [0, n). Partitioning is static over i, so code
// that writes to slot i of a preallocated buffer is deterministic for any
// worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace drex
