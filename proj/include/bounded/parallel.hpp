#pragma once

// Deterministic task-index parallelism. Callers provide a body invoked once
// per index; bodies must write only to per-index slots so the result is
// independent of scheduling, and must not throw (catch and record failures in
// the slot instead). Worker count comes from BOUNDED_EFFECTS_THREADS (0 or
// unset means hardware concurrency).

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <thread>
#include <vector>

namespace bounded {

inline unsigned effective_thread_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  const char* env = std::getenv("BOUNDED_EFFECTS_THREADS");
  if (env == nullptr || *env == '\0') return hw;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (end == env || v < 0) return hw;
  if (v == 0) return hw;
  return static_cast<unsigned>(v);
}

namespace detail {
inline thread_local bool inside_parallel_region = false;
}

template <typename Body>
void parallel_for_index(std::size_t n_tasks, const Body& body) {
  unsigned n_threads = effective_thread_count();
  // Nested calls run sequentially: one level of fan-out is enough and the
  // results must not depend on where the call sits.
  if (detail::inside_parallel_region || n_threads <= 1 || n_tasks <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  if (n_threads > n_tasks) n_threads = static_cast<unsigned>(n_tasks);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) {
    workers.emplace_back([&]() {
      detail::inside_parallel_region = true;
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n_tasks) return;
        body(i);
      }
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace bounded
