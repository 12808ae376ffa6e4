#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace tensorrig {

/// Worker count for a requested width; 0 means hardware concurrency.
inline unsigned resolve_width(unsigned width) {
  if (width == 0) width = std::max(1u, std::thread::hardware_concurrency());
  return width;
}

/// Runs body(i) for i in [0, count) on up to `width` threads. Work is pulled
/// from a shared counter, so callers must write results by index to stay
/// deterministic. The first exception thrown by any call is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned width, Body&& body) {
  width = std::min<std::size_t>(resolve_width(width), std::max<std::size_t>(count, 1));
  if (width <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(width);
    for (unsigned w = 0; w < width; ++w)
      workers.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
          try {
            body(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace tensorrig
