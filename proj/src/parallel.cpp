#include "xplain/parallel.hpp"

#include <atomic>

namespace xplain::parallel {
namespace {

unsigned default_threads() noexcept {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::atomic<unsigned> g_threads{default_threads()};

}  // namespace

unsigned thread_count() noexcept { return g_threads.load(std::memory_order_relaxed); }

void set_thread_count(unsigned n) noexcept {
  g_threads.store(n == 0 ? default_threads() : n, std::memory_order_relaxed);
}

}  // namespace xplain::parallel
