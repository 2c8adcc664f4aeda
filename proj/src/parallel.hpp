#ifndef NPOLY_SRC_PARALLEL_HPP_
#define NPOLY_SRC_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace npoly::detail
{

// Runs task(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; the first exception is rethrown after all workers join.
inline void parallel_for(int count, unsigned threads, const std::function<void(int)>& task)
{
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max(count, 0))));
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) {
      task(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) {
            failure = std::current_exception();
          }
        }
      }
    });
  }
  pool.clear();
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace npoly::detail

#endif  // NPOLY_SRC_PARALLEL_HPP_
