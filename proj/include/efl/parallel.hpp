#pragma once

/// @file parallel.hpp
/// Deterministic index-addressed work sharing: results land in preallocated
/// slots keyed by index, so thread count never changes any output byte.

#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace efl {

/// Run fn(i) for i in [0, n) on up to `threads` workers (contiguous block
/// partition).  threads <= 1 runs inline.  The first exception thrown by any
/// worker is rethrown on the caller after all workers joined.
inline void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = n * w / workers;
    const std::size_t hi = n * (w + 1) / workers;
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace efl
