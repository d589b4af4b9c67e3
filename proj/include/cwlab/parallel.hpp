#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cwlab {

/// Worker count: CWLAB_THREADS if set to a positive integer, else hardware concurrency.
inline unsigned worker_count() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("CWLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return hw;
}

/// out[i] = f(in[i]); items are independent. The first exception thrown by
/// any item is rethrown after all workers finish.
template <class T, class F>
auto parallel_map(const std::vector<T>& in, F f) -> std::vector<decltype(f(in[0]))> {
  using R = decltype(f(in[0]));
  std::vector<R> out(in.size());
  const unsigned nthreads = std::min<std::size_t>(worker_count(), in.size());
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = f(in[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= in.size()) return;
      try {
        out[i] = f(in[i]);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace cwlab
