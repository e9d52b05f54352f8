#pragma once

#include <cstddef>
#include <functional>

namespace annuli {

// 0 means "use hardware concurrency".
int effective_threads(int requested);

// Runs fn(begin, end) over contiguous index ranges. Results must be written
// by index (no shared mutable state), so the outcome is independent of the
// thread count.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace annuli
