#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace fatoulab {

/// Worker count: explicit argument wins, then the FATOULAB_THREADS
/// environment variable, then hardware concurrency. Always in [1, 64].
inline int resolve_threads(int requested) {
  long n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("FATOULAB_THREADS")) {
      n = std::strtol(env, nullptr, 10);
    }
  }
  if (n <= 0) n = static_cast<long>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (n > 64) n = 64;
  return static_cast<int>(n);
}

/// Index-parallel map. Each index is processed exactly once and workers
/// write only to their own slots, so results are identical for any thread
/// count, including 1.
template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const int nt = resolve_threads(threads);
  if (nt <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(nt, count);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace fatoulab
