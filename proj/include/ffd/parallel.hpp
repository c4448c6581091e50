#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ffd {

/// Worker count from FFD_JOBS, else 1.
inline int default_jobs() {
  if (const char* env = std::getenv("FFD_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

/// Calls fn(i) for i in [0, count) on up to `jobs` threads. Callers write
/// results into slot i, so any reduction done afterwards in index order is
/// independent of the worker count. The first exception is rethrown.
template <typename F>
void parallel_for(std::size_t count, int jobs, F&& fn) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(std::min<std::size_t>(count, 256))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace ffd
