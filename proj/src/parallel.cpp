#include <crossinggram/parallel.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crossinggram {

std::size_t resolve_threads(Execution exec) {
  if (exec.threads > 0) return exec.threads;
  if (const char* env = std::getenv("CROSSINGGRAM_THREADS")) {
    std::size_t v = 0;
    const auto* end = env + std::strlen(env);
    if (auto [p, ec] = std::from_chars(env, end, v); ec == std::errc{} && p == end && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, Execution exec, const std::function<void(std::size_t, std::size_t)>& body) {
  if (count == 0) return;
  const std::size_t workers = std::min(resolve_threads(exec), count);
  if (workers == 1) {
    body(0, count);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = count * w / workers;
      const std::size_t end = count * (w + 1) / workers;
      pool.emplace_back([&, begin, end] {
        try {
          body(begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace crossinggram
