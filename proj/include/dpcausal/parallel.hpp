#pragma once

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace dpcausal {

namespace detail {
inline bool& inside_parallel_region() {
  thread_local bool active = false;
  return active;
}
}  // namespace detail

// Runs body(i) for i in [begin, end) on up to hardware_concurrency threads.
// Work is dealt in contiguous blocks; results must not depend on scheduling.
// Nested calls run serially instead of oversubscribing.
template <typename Body>
void parallel_for(int begin, int end, Body&& body) {
  const int count = end - begin;
  if (count <= 0) return;
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(count)));
  if (detail::inside_parallel_region()) workers = 1;
  if (workers == 1) {
    for (int i = begin; i < end; ++i) body(i);
    return;
  }

  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  const int block = (count + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const int lo = begin + w * block;
    const int hi = std::min(end, lo + block);
    if (lo >= hi) break;
    threads.emplace_back([&, lo, hi, w] {
      detail::inside_parallel_region() = true;
      try {
        for (int i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace dpcausal
