#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace gaminv {

/// Worker count: GAMINV_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for every i in [begin, end), splitting the range into
/// contiguous blocks across thread_count() threads. Each index is processed by
/// exactly one thread, so per-index results are identical to a sequential run.
/// The first exception thrown by any block is rethrown on the caller.
template <typename Body>
void parallel_for(int begin, int end, Body&& body) {
  const int n = end - begin;
  if (n <= 0) return;
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const int lo = begin + static_cast<int>(static_cast<long long>(n) * w / workers);
      const int hi = begin + static_cast<int>(static_cast<long long>(n) * (w + 1) / workers);
      pool.emplace_back([&, lo, hi] {
        try {
          for (int i = lo; i < hi; ++i) body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace gaminv
