#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace xplain::parallel {

/// Process-wide worker count used by the subset enumerators. Defaults to the
/// hardware concurrency. Results never depend on this value.
unsigned thread_count() noexcept;
void set_thread_count(unsigned n) noexcept;

/// Splits [0, count) into at most thread_count() contiguous blocks and runs
/// fn(block_index, begin, end) for each. Block boundaries depend only on
/// `count` and `blocks`, so callers that reduce per-block results in block
/// order get the same answer for any thread count.
template <class Fn>
void for_blocks(std::size_t count, std::size_t blocks, Fn&& fn) {
  if (count == 0) return;
  blocks = std::clamp<std::size_t>(blocks, 1, count);
  const std::size_t workers = std::min<std::size_t>(thread_count(), blocks);
  auto bounds = [&](std::size_t b) { return count * b / blocks; };

  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) fn(b, bounds(b), bounds(b + 1));
    return;
  }

  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t b = t; b < blocks; b += workers) fn(b, bounds(b), bounds(b + 1));
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace xplain::parallel
