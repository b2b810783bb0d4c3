/* SPDX-License-Identifier: Apache-2.0 */
#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qaprlt::detail {

/// Runs fn(worker, begin, end) over contiguous chunks of [0, count). The
/// first exception thrown by any chunk is rethrown after all chunks finish.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    fn(0u, std::size_t{0}, count);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) { break; }
      pool.emplace_back([&, w, begin, end] {
        try {
          fn(static_cast<unsigned>(w), begin, end);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) { failure = std::current_exception(); }
        }
      });
    }
  }
  if (failure) { std::rethrow_exception(failure); }
}

}  // namespace qaprlt::detail
