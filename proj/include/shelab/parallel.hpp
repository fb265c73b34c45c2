#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace shelab {

/// Splits [0, items) into fixed chunks, accumulates each chunk into a copy of `prototype`
/// with `process(acc, item)`, and merges chunk results strictly in chunk order.
/// The result does not depend on the worker count. Acc needs `void merge(const Acc&)`.
template <class Acc, class Process>
Acc parallel_reduce(int items, int chunk, int workers, const Acc& prototype, Process&& process) {
  chunk = std::max(chunk, 1);
  const int chunks = (items + chunk - 1) / chunk;
  Acc total = prototype;
  if (workers <= 1 || chunks <= 1) {
    for (int c = 0; c < chunks; ++c) {
      Acc local = prototype;
      for (int i = c * chunk; i < std::min(items, (c + 1) * chunk); ++i) process(local, i);
      total.merge(local);
    }
    return total;
  }

  std::vector<std::optional<Acc>> done(static_cast<size_t>(chunks));
  std::atomic<int> next{0};
  std::mutex mutex;
  int next_merge = 0;
  std::exception_ptr failure;
  std::atomic<bool> abort{false};

  auto worker = [&] {
    while (!abort.load()) {
      const int c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        Acc local = prototype;
        for (int i = c * chunk; i < std::min(items, (c + 1) * chunk); ++i) process(local, i);
        std::lock_guard<std::mutex> lock(mutex);
        done[static_cast<size_t>(c)].emplace(std::move(local));
        while (next_merge < chunks && done[static_cast<size_t>(next_merge)]) {
          total.merge(*done[static_cast<size_t>(next_merge)]);
          done[static_cast<size_t>(next_merge)].reset();
          ++next_merge;
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
        abort = true;
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  const int n = std::min(workers, chunks);
  pool.reserve(static_cast<size_t>(n));
  for (int w = 0; w < n; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return total;
}

/// Per-item results in item order.
template <class T, class Fn>
std::vector<T> parallel_map(int items, int workers, Fn&& fn) {
  struct Slots {
    std::vector<std::pair<int, T>> entries;
    void merge(const Slots& o) { entries.insert(entries.end(), o.entries.begin(), o.entries.end()); }
  };
  auto slots = parallel_reduce(items, 1, workers, Slots{},
                               [&](Slots& s, int i) { s.entries.emplace_back(i, fn(i)); });
  std::vector<T> out;
  out.reserve(slots.entries.size());
  for (auto& e : slots.entries) out.push_back(std::move(e.second));
  return out;
}

}  // namespace shelab
