#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "smallgaps/summation.hpp"

namespace smallgaps {

struct Exec {
  unsigned threads = 1;
};

// Fixed work-chunk length for window reductions. Chunk boundaries never
// depend on the thread count.
inline constexpr std::uint64_t kReductionChunk = std::uint64_t{1} << 16;

// Runs body(i) for i in [0, count) over up to exec.threads workers.
// Exceptions are rethrown on the calling thread (first one wins).
template <class Body>
void parallel_for(std::uint64_t count, const Exec& exec, Body&& body) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, exec.threads), count));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  if (error) std::rethrow_exception(error);
}

// Deterministic sum of term(n) over n in [first, last]. Each fixed-size
// chunk is pairwise-summed in order, then chunk totals are pairwise-summed
// in chunk order; the result is identical for every thread count.
template <class Term>
double window_sum(std::uint64_t first, std::uint64_t last, const Exec& exec, Term&& term) {
  if (last < first) return 0.0;
  const std::uint64_t length = last - first + 1;
  const std::uint64_t chunks = (length + kReductionChunk - 1) / kReductionChunk;
  std::vector<double> partial(chunks, 0.0);
  parallel_for(chunks, exec, [&](std::uint64_t c) {
    const std::uint64_t lo = first + c * kReductionChunk;
    const std::uint64_t hi = std::min(last, lo + kReductionChunk - 1);
    PairwiseSum s;
    for (std::uint64_t n = lo; n <= hi; ++n) s.add(term(n));
    partial[c] = s.total();
  });
  return pairwise_sum(partial);
}

// Integer count of n in [first, last] satisfying pred; order-independent.
template <class Pred>
std::uint64_t window_count(std::uint64_t first, std::uint64_t last, const Exec& exec, Pred&& pred) {
  if (last < first) return 0;
  const std::uint64_t length = last - first + 1;
  const std::uint64_t chunks = (length + kReductionChunk - 1) / kReductionChunk;
  std::vector<std::uint64_t> partial(chunks, 0);
  parallel_for(chunks, exec, [&](std::uint64_t c) {
    const std::uint64_t lo = first + c * kReductionChunk;
    const std::uint64_t hi = std::min(last, lo + kReductionChunk - 1);
    std::uint64_t count = 0;
    for (std::uint64_t n = lo; n <= hi; ++n) count += pred(n) ? 1 : 0;
    partial[c] = count;
  });
  std::uint64_t total = 0;
  for (auto v : partial) total += v;
  return total;
}

}  // namespace smallgaps
