#pragma once

#include <cstddef>
#include <functional>

namespace skm {

/// Worker count used by the parallel scans. Defaults to 1.
void set_thread_count(std::size_t threads);
std::size_t thread_count() noexcept;

/// Work is cut into fixed blocks of this many items regardless of thread count,
/// so per-block partial results can be reduced in block order.
inline constexpr std::size_t kBlockSize = 2048;

inline std::size_t block_count(std::size_t n) noexcept {
  return (n + kBlockSize - 1) / kBlockSize;
}

/// Calls body(block, begin, end) for every block of [0, n). Blocks run
/// concurrently when thread_count() > 1; the caller owns any reduction.
void for_each_block(std::size_t n,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

/// Calls body(i) for i in [0, n), split across threads in contiguous chunks.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace skm
