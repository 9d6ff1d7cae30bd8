#pragma once

#include <cstddef>
#include <functional>

namespace thirdq {

// Worker count: THIRDQ_THREADS if set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls task(i) for i in [0, count) on up to `workers` threads. Tasks must
// write only to their own slot; the first exception thrown is rethrown.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace thirdq
