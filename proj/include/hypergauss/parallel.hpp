#ifndef HYPERGAUSS_PARALLEL_HPP
#define HYPERGAUSS_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace hypergauss {

/// Runs fn(begin, end) over disjoint chunks of [0, count). Chunks write to
/// disjoint output ranges, so results do not depend on the thread count.
/// The first exception thrown by any chunk is rethrown on the caller.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t min_chunk = 256) {
  const std::size_t hw = std::max<unsigned>(1, std::thread::hardware_concurrency());
  const std::size_t threads = std::min(hw, std::max<std::size_t>(1, count / min_chunk));
  if (threads <= 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, begin, end] {
      try {
        fn(begin, end);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace hypergauss

#endif  // HYPERGAUSS_PARALLEL_HPP
