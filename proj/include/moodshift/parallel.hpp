#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace moodshift {

/// Resolves a worker count: positive request wins, then MOODSHIFT_THREADS,
/// then hardware concurrency.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MOODSHIFT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs fn(block_index) for block_index in [0, num_blocks) on up to
/// `threads` workers. Blocks are fixed work units with disjoint outputs, so
/// results do not depend on the worker count.
template <class Fn>
void parallel_blocks(std::size_t num_blocks, int threads, Fn&& fn) {
  if (num_blocks == 0) return;
  const int workers = std::min<std::size_t>(std::max(threads, 1), num_blocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < num_blocks; ++b) fn(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t b = next.fetch_add(1);
        if (b >= num_blocks) return;
        try {
          fn(b);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace moodshift
