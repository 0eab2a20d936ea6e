#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sphq {

/// Worker count used by parallel loops; 0 means std::thread::hardware_concurrency().
void set_worker_count(unsigned n);
unsigned worker_count();

namespace detail {
/// True on threads currently executing a parallel_for body; nested loops run serially.
bool& in_parallel_region();
}

/// Runs fn(i) for i in [0, n) on the worker pool. Each index runs exactly once; callers
/// write results into slot i so the merge order never depends on scheduling.
/// The first exception thrown by any job is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(worker_count(), n));
  if (workers <= 1 || detail::in_parallel_region()) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto body = [&] {
    detail::in_parallel_region() = true;
    struct Reset {
      ~Reset() { detail::in_parallel_region() = false; }
    } reset;
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace sphq
