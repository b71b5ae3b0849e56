#pragma once

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace semnav {

// Runs fn(i) for i in [0, n) on up to `workers` threads. Each index runs
// exactly once; the first exception is rethrown after all threads join.
template <typename F>
void parallel_for(int n, int workers, F&& fn) {
  if (workers <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < std::min(workers, n); ++w)
      pool.emplace_back([&] {
        for (int i = next++; i < n && !failed; i = next++) {
          try {
            fn(i);
          } catch (...) {
            if (!failed.exchange(true)) error = std::current_exception();
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace semnav
