#pragma once

#include <cstddef>
#include <functional>

namespace segsolve {

// Worker count: requested if nonzero, else SEGSOLVE_THREADS, else hardware
// concurrency (at least 1).
unsigned resolve_threads(unsigned requested);

// Calls body(i) for i in [0, count) on up to `threads` workers. Each index runs
// exactly once; callers write results by index so output order never depends
// on scheduling. The first exception thrown by a body is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace segsolve
