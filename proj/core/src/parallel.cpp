#include "skm/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace skm {
namespace {

std::atomic<std::size_t> g_threads{1};

// Runs task(t) for t in [0, workers) and rethrows the first failure.
template <typename Task>
void run_workers(std::size_t workers, Task&& task) {
  if (workers <= 1) {
    task(std::size_t{0});
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    auto guarded = [&](std::size_t t) {
      try {
        task(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    };
    for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(guarded, t);
    guarded(0);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void set_thread_count(std::size_t threads) { g_threads.store(std::max<std::size_t>(1, threads)); }

std::size_t thread_count() noexcept { return g_threads.load(); }

void for_each_block(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body) {
  const std::size_t blocks = block_count(n);
  const std::size_t workers = std::min(thread_count(), blocks);
  run_workers(workers, [&](std::size_t t) {
    for (std::size_t b = t; b < blocks; b += std::max<std::size_t>(workers, 1)) {
      const std::size_t begin = b * kBlockSize;
      body(b, begin, std::min(n, begin + kBlockSize));
    }
  });
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  run_workers(workers, [&](std::size_t t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    for (std::size_t i = begin; i < end; ++i) body(i);
  });
}

}  // namespace skm
