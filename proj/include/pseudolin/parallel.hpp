#pragma once

// Order-preserving parallel map over an index range on std::thread.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace pseudolin {

inline unsigned worker_count(std::size_t jobs) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(jobs, 1)));
}

/// out[i] = f(i) for i in [0, n). The first exception (by index) is rethrown
/// after all workers have joined.
template <typename F>
auto parallel_map(std::size_t n, F&& f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        slots[i].emplace(f(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(n);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

/// Like parallel_map, but stops scheduling indices beyond the smallest i with
/// stop(out[i]). Returns the prefix out[0..first stop] (or everything).
template <typename F, typename Stop>
auto parallel_map_until(std::size_t n, F&& f, Stop&& stop) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> first_stop{n};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      if (i > first_stop.load()) break;
      try {
        R r = f(i);
        if (stop(r)) {
          std::size_t cur = first_stop.load();
          while (i < cur && !first_stop.compare_exchange_weak(cur, i)) {
          }
        }
        slots[i].emplace(std::move(r));
      } catch (...) {
        errors[i] = std::current_exception();
        std::size_t cur = first_stop.load();
        while (i < cur && !first_stop.compare_exchange_weak(cur, i)) {
        }
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(n);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  const std::size_t end = std::min(n, first_stop.load() + 1);
  std::vector<R> out;
  for (std::size_t i = 0; i < end; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace pseudolin
