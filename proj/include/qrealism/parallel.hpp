#pragma once

// Deterministic fork-join helper. Work items write results by index, so the
// outcome is identical for any thread count (including 1). Nested calls run
// serially on the calling thread rather than oversubscribing.

#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace qrealism {

inline unsigned thread_budget() {
  if (const char* env = std::getenv("QREALISM_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

// Invokes body(i) for i in [0, n). Exceptions from workers are rethrown on
// the caller (first by index).
template <typename F>
void parallel_for(std::size_t n, F&& body) {
  if (n == 0) return;
  const unsigned budget = thread_budget();
  if (budget <= 1 || n == 1 || detail::inside_parallel_region) {
    struct Reset {
      bool prev = detail::inside_parallel_region;
      ~Reset() { detail::inside_parallel_region = prev; }
    } reset;
    detail::inside_parallel_region = true;
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(budget, n));
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t] {
      detail::inside_parallel_region = true;
      try {
        // Static contiguous split keeps per-item work deterministic.
        const std::size_t begin = n * t / n_threads;
        const std::size_t end = n * (t + 1) / n_threads;
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace qrealism
