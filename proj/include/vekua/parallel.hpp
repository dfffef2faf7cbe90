#pragma once

// Static-partition parallel map. The thread count comes from the
// VEKUA_THREADS environment variable, falling back to the hardware count.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace vekua {

inline int thread_count() {
  if (const char* env = std::getenv("VEKUA_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// out[k] = f(k) for k < n. Results do not depend on the thread count; if
/// several calls throw, the exception of the smallest index is rethrown.
template <class R, class F>
std::vector<R> parallel_map(std::size_t n, F&& f, int threads = thread_count()) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      try {
        out[k] = f(k);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), n);
  if (workers <= 1) {
    run(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
      if (lo < hi) pool.emplace_back(run, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace vekua
