#pragma once

#include <cstddef>
#include <functional>

namespace hypstab {

// Worker count: HYPSTAB_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
unsigned worker_count();

// Calls body(i) for every i in [begin, end), split into contiguous chunks
// across worker_count() threads. body must only write to slots owned by i.
void parallel_for(std::size_t begin, std::size_t end, const std::function<void(std::size_t)>& body);

}  // namespace hypstab
