#pragma once

// Deterministic chunked parallelism. The index range is cut into chunks whose
// boundaries depend only on the range size, never on the thread count, and
// per-chunk results are merged in chunk order.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace uforge {

inline unsigned default_threads() {
  const unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

/// Splits [0, n) into chunks of `chunk` indices and calls fn(chunk_index,
/// begin, end) for each, on up to `threads` workers. Exceptions from a
/// worker are rethrown on the caller (the one from the lowest chunk wins).
template <class Fn>
void for_each_chunk(std::size_t n, std::size_t chunk, unsigned threads, Fn&& fn) {
  if (n == 0) return;
  chunk = std::max<std::size_t>(chunk, 1);
  const std::size_t chunks = (n + chunk - 1) / chunk;
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::size_t>(chunks, 1024))));
  if (threads == 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c, c * chunk, std::min(n, (c + 1) * chunk));
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::size_t err_chunk = chunks;
  std::exception_ptr err;
  auto worker = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        fn(c, c * chunk, std::min(n, (c + 1) * chunk));
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (c < err_chunk) err_chunk = c, err = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

/// Collects fn(begin, end) -> std::vector<T> per chunk and concatenates the
/// pieces in chunk order.
template <class T, class Fn>
std::vector<T> collect_chunks(std::size_t n, std::size_t chunk, unsigned threads, Fn&& fn) {
  chunk = std::max<std::size_t>(chunk, 1);
  std::vector<std::vector<T>> parts((n + chunk - 1) / chunk);
  for_each_chunk(n, chunk, threads, [&](std::size_t c, std::size_t b, std::size_t e) { parts[c] = fn(b, e); });
  std::vector<T> out;
  for (auto& p : parts) out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  return out;
}

}  // namespace uforge
