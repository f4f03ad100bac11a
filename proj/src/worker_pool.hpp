#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace clockfcs {

// Runs body(i) for i in [0, count). Work is dealt to `threads` workers
// (0 = hardware concurrency); results must be stored by index inside `body`
// so that downstream reductions are independent of the thread count. The
// first captured exception is rethrown after all workers join.
template <typename Body>
void for_each_index(int count, int threads, const Body& body) {
  int workers =
      threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, std::max(count, 1));
  if (workers == 1 || count < 2) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> failures(workers);
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
          body(i);
      } catch (...) {
        failures[w] = std::current_exception();
      }
    });
  for (auto& worker : pool) worker.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

}  // namespace clockfcs
