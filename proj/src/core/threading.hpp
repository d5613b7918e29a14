#ifndef FIELDINFER_CORE_THREADING_HPP_
#define FIELDINFER_CORE_THREADING_HPP_

#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fieldinfer {

// Runs fn(i) for i in [begin, end). Each index must write only its own output
// slots; results are then independent of the worker count.
inline void parallel_for(int begin, int end, int threads,
                         const std::function<void(int)>& fn) {
  const int count = end - begin;
  if (threads <= 1 || count <= 1) {
    for (int i = begin; i < end; i++) fn(i);
    return;
  }
  const int workers = std::min(threads, count);
  std::atomic<int> next(begin);
  std::mutex err_mu;
  std::exception_ptr err;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; w++) {
    pool.emplace_back([&] {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= end) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace fieldinfer

#endif  // FIELDINFER_CORE_THREADING_HPP_
