#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace percchem {

inline unsigned default_workers() {
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1;
}

// Run fn(worker, item) for items 0..n_items-1 on `workers` threads.  Worker w
// takes items w, w+W, w+2W, …, so per-worker state is safe to index by w.
// Callers must write per-item results into preallocated slots and reduce
// sequentially afterwards; that keeps outputs independent of worker count.
inline void parallel_items(std::uint64_t n_items, unsigned workers,
                           const std::function<void(unsigned, std::uint64_t)>& fn) {
  if (workers == 0) workers = 1;
  if (workers > n_items) workers = n_items ? static_cast<unsigned>(n_items) : 1;
  if (workers == 1) {
    for (std::uint64_t i = 0; i < n_items; ++i) fn(0, i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      try {
        for (std::uint64_t i = w; i < n_items; i += workers) fn(w, i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (unsigned w = 0; w < workers; ++w)
    if (errors[w]) std::rethrow_exception(errors[w]);
}

}  // namespace percchem
