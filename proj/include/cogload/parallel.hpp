#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cogload {

// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work items must write
// only to their own output slot; results are then independent of `jobs`.
// The first exception (lowest index) is rethrown after all workers finish.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_index = n;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(err_mutex);
        if (i < first_error_index) {
          first_error_index = i;
          first_error = std::current_exception();
        }
      }
    }
  };
  const unsigned count = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::jthread> threads;
  threads.reserve(count);
  for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker);
  threads.clear();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cogload
