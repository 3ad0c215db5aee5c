#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace discrelab {

// Global worker count for the few hot loops that parallelize.  Results are
// bit-identical for any thread count: work is split into fixed index blocks
// and partials are reduced in block order.
inline int& thread_count() {
  static int n = 1;
  return n;
}

inline void set_threads(int n) {
  thread_count() = std::max(1, n);
}

// Runs fn(i) -> double for i in [0, n), returns the ordered sum of
// per-block partials.  Block layout is independent of the thread count.
template <class Fn>
double parallel_sum(std::size_t n, Fn&& fn, std::size_t block = 1024) {
  const std::size_t nblocks = (n + block - 1) / block;
  std::vector<double> partial(nblocks, 0.0);
  auto run_block = [&](std::size_t b) {
    double acc = 0.0, comp = 0.0;  // Kahan
    const std::size_t lo = b * block, hi = std::min(n, lo + block);
    for (std::size_t i = lo; i < hi; ++i) {
      double y = fn(i) - comp;
      double t = acc + y;
      comp = (t - acc) - y;
      acc = t;
    }
    partial[b] = acc;
  };
  const int workers = std::min<std::size_t>(thread_count(), nblocks);
  if (workers <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run_block(b);
  } else {
    std::vector<std::future<void>> fs;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < workers; ++w)
      fs.push_back(std::async(std::launch::async, [&] {
        for (std::size_t b = next++; b < nblocks; b = next++) run_block(b);
      }));
    for (auto& f : fs) f.get();
  }
  double acc = 0.0, comp = 0.0;
  for (double p : partial) {
    double y = p - comp;
    double t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
  return acc;
}

// Runs fn(i) for i in [0, n); each index must write only its own slots.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const int workers = int(std::min<std::size_t>(thread_count(), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> fs;
  const std::size_t block = 256;
  for (int w = 0; w < workers; ++w)
    fs.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        std::size_t b = next.fetch_add(1);
        std::size_t lo = b * block;
        if (lo >= n) return;
        std::size_t hi = std::min(n, lo + block);
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      }
    }));
  for (auto& f : fs) f.get();
}

}  // namespace discrelab
