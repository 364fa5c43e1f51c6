#pragma once

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace mordae {

// Worker count: MORDAE_THREADS overrides; defaults to hardware concurrency.
inline unsigned thread_count() {
  if (const char* env = std::getenv("MORDAE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Runs fn(i) for i in [0, count).  Results must be written to caller-owned,
// index-addressed slots so the output is identical for any worker count.
// The first exception thrown by any task is rethrown after all workers join.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = std::min<std::size_t>(thread_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex err_mtx;
  std::size_t next = 0;
  std::mutex next_mtx;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i;
        {
          std::lock_guard lk(next_mtx);
          if (next >= count) return;
          i = next++;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lk(err_mtx);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace mordae
