#ifndef MARKERLR_SRC_PARALLEL_HPP
#define MARKERLR_SRC_PARALLEL_HPP

#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace markerlr::detail {

// Calls fn(i) for i in [0, n), splitting contiguous blocks over `threads`
// workers. Each index is written by exactly one worker, so output order is
// deterministic. The first exception thrown by any worker is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn &&fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(threads, n);
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        try {
          for (std::size_t i = begin; i < end; ++i) fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto &e : errors)
    if (e) std::rethrow_exception(e);
}

} // namespace markerlr::detail

#endif // MARKERLR_SRC_PARALLEL_HPP
