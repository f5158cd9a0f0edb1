#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace holegaf {

inline constexpr std::uint64_t kTrialChunk = 1024;

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs chunk_fn(begin, end) over fixed-size trial chunks and returns the per-chunk
// results in chunk order. Chunk boundaries do not depend on the thread count, so
// merging the results left to right is bit-identical for any parallelism degree.
template <class Result, class ChunkFn>
std::vector<Result> map_trial_chunks(std::uint64_t trials, unsigned threads, ChunkFn chunk_fn) {
  const std::uint64_t chunks = (trials + kTrialChunk - 1) / kTrialChunk;
  std::vector<Result> results(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        std::uint64_t begin = c * kTrialChunk;
        std::uint64_t end = std::min(trials, begin + kTrialChunk);
        results[c] = chunk_fn(begin, end);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
      }
    }
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(chunks, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace holegaf
