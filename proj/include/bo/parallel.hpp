#pragma once

#include <cstddef>
#include <functional>

namespace bo {

// Worker count: BOBNF_WORKERS if set and positive, else hardware concurrency.
std::size_t worker_count();

// Runs body(i) for i in [0, count) on a transient pool. The first exception
// thrown by any task is rethrown on the calling thread after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace bo
