#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <thread>
#include <vector>

namespace bellcc {

struct ArgMax {
  double value;
  std::uint64_t index;
};

// Maximum of score(index) over [0, count). Ties go to the smallest index,
// so the result does not depend on the number of worker threads.
template <class Score>
ArgMax parallel_argmax(std::uint64_t count, int threads, Score score) {
  const auto scan = [&](std::uint64_t lo, std::uint64_t hi) {
    ArgMax best{score(lo), lo};
    for (std::uint64_t n = lo + 1; n < hi; ++n) {
      const double v = score(n);
      if (v > best.value) best = {v, n};
    }
    return best;
  };
  const std::uint64_t workers =
      std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads > 0 ? threads : 1, count));
  if (workers == 1) return scan(0, count);

  std::vector<ArgMax> partial(workers);
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (count + workers - 1) / workers;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = w * chunk, hi = std::min(count, lo + chunk);
    if (lo >= hi) {
      partial[w] = {-std::numeric_limits<double>::infinity(), count};
      continue;
    }
    pool.emplace_back([&, w, lo, hi] { partial[w] = scan(lo, hi); });
  }
  for (auto& t : pool) t.join();
  ArgMax best = partial[0];
  for (std::uint64_t w = 1; w < workers; ++w)
    if (partial[w].value > best.value) best = partial[w];
  return best;
}

// Runs job(n) for n in [0, count) on up to `threads` workers; results are
// stored by index.
template <class Result, class Job>
std::vector<Result> parallel_map(int count, int threads, Job job) {
  std::vector<Result> out(count);
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int n = 0; n < count; ++n) out[n] = job(n);
    return out;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (int n = w; n < count; n += workers) out[n] = job(n);
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace bellcc
