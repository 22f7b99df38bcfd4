#pragma once

#include <cstddef>
#include <functional>

namespace crossinggram {

// Worker-count request. Zero means "use CROSSINGGRAM_THREADS, else the
// hardware concurrency".
struct Execution {
  std::size_t threads = 0;
};

std::size_t resolve_threads(Execution exec);

// Calls body(begin, end) over a static partition of [0, count) into at most
// resolve_threads(exec) contiguous chunks. Chunk boundaries do not depend on
// timing, and callers reduce results in index order.
void parallel_for(std::size_t count, Execution exec, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace crossinggram
