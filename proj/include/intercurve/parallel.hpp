#pragma once

// Deterministic fork-join helper. Work items write into preallocated slots and
// reductions run sequentially afterwards, so thread count never changes results.
// INTERCURVE_THREADS caps the worker count.

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace intercurve {

inline int max_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("INTERCURVE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return n;
}

namespace detail {
inline thread_local bool inside_parallel_block = false;
}

// Calls fn(begin, end) on contiguous index blocks, one block per worker.
// Nested calls from inside a worker run inline, so compound pipelines never
// oversubscribe the machine.
template <typename Fn>
void parallel_blocks(long count, Fn&& fn) {
  if (count <= 0) return;
  const int workers = detail::inside_parallel_block
                          ? 1
                          : static_cast<int>(std::min<long>(max_threads(), count));
  if (workers == 1) {
    fn(0L, count);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  const long chunk = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const long lo = w * chunk;
    const long hi = std::min(count, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, &errors, w, lo, hi] {
      detail::inside_parallel_block = true;
      try {
        fn(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
      detail::inside_parallel_block = false;
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace intercurve
