#pragma once

/*! @file reduce.hpp
    @brief Run-to-run deterministic reductions.  Element loops accumulate
           per-block partial sums over a fixed block partition; blocks are
           combined serially in index order, so the result is independent of
           the worker count. */

#include <cstddef>
#include <thread>
#include <vector>

namespace twistlab {

/// Process-wide worker count, set once by the CLI (--threads).
int thread_count();
void set_thread_count(int n);

inline constexpr std::size_t kReduceBlock = 4096;

/// Sum of term(i) for i in [0,n), blocked.  term must be pure.
template <class Term>
double block_sum(std::size_t n, Term term) {
  const std::size_t nblocks = (n + kReduceBlock - 1) / kReduceBlock;
  std::vector<double> partial(nblocks, 0.0);
  auto run = [&](std::size_t b0, std::size_t b1) {
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t lo = b * kReduceBlock;
      const std::size_t hi = lo + kReduceBlock < n ? lo + kReduceBlock : n;
      double s = 0;
      for (std::size_t i = lo; i < hi; ++i) s += term(i);
      partial[b] = s;
    }
  };
  const int workers = thread_count();
  if (workers <= 1 || nblocks <= 1) {
    run(0, nblocks);
  } else {
    std::vector<std::thread> pool;
    const std::size_t per = (nblocks + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::size_t b0 = w * per;
      if (b0 >= nblocks) break;
      const std::size_t b1 = b0 + per < nblocks ? b0 + per : nblocks;
      pool.emplace_back(run, b0, b1);
    }
    for (auto &t : pool) t.join();
  }
  double total = 0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace twistlab
