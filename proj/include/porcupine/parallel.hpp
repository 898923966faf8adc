#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace porcupine {

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("PORCUPINE_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

// Fixed-shape block partition: results depend only on the block layout, never
// on the worker count, so reductions merged in block order are bit-identical
// across thread counts.
inline constexpr std::size_t kReduceBlocks = 64;

// fn(block_index, begin, end) fills one pre-allocated slot per block; blocks
// are contiguous index ranges [begin, end).
template <typename Fn>
void run_blocks(std::size_t n_items, unsigned threads, Fn&& fn) {
  const std::size_t blocks = std::min<std::size_t>(kReduceBlocks, std::max<std::size_t>(n_items, 1));
  if (threads <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t lo = n_items * b / blocks, hi = n_items * (b + 1) / blocks;
      fn(b, lo, hi);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) {
      const std::size_t lo = n_items * b / blocks, hi = n_items * (b + 1) / blocks;
      fn(b, lo, hi);
    }
  };
  std::vector<std::thread> pool;
  const unsigned n_workers = std::min<unsigned>(threads, static_cast<unsigned>(blocks));
  pool.reserve(n_workers);
  for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

inline std::size_t block_count(std::size_t n_items) {
  return std::min<std::size_t>(kReduceBlocks, std::max<std::size_t>(n_items, 1));
}

}  // namespace porcupine
