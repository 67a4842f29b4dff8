#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fidsim {

/// Trajectories are processed in fixed-size blocks; each block's partial sums
/// are merged serially in block order afterwards, so results are bitwise
/// independent of the worker count.
constexpr std::size_t kTrajectoryBlock = 256;

inline std::size_t block_count(std::size_t n) {
  return (n + kTrajectoryBlock - 1) / kTrajectoryBlock;
}

inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

/// Calls fn(block_index, begin, end) for every block of [0, n). Blocks are
/// claimed dynamically when workers > 1; fn must only write state owned by
/// its block index.
template <typename Fn>
void for_each_block(std::size_t n, int workers, Fn&& fn) {
  const std::size_t nblocks = block_count(n);
  auto run_block = [&](std::size_t b) {
    const std::size_t begin = b * kTrajectoryBlock;
    const std::size_t end = begin + kTrajectoryBlock < n ? begin + kTrajectoryBlock : n;
    fn(b, begin, end);
  };
  workers = resolve_workers(workers);
  if (workers <= 1 || nblocks <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= nblocks) return;
      try {
        run_block(b);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t nthreads =
      static_cast<std::size_t>(workers) < nblocks ? static_cast<std::size_t>(workers) : nblocks;
  pool.reserve(nthreads);
  for (std::size_t i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fidsim
