// Deterministic parallel helpers: an index-space parallel-for whose outputs
// are written by index, and fixed-shape summation so reductions are
// bit-identical for every worker count.

#ifndef GYROSCALE_PARALLEL
#define GYROSCALE_PARALLEL

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace gyroscale {

// Worker count resolution: the GYROSCALE_THREADS environment variable wins,
// then an explicit request, then the hardware concurrency.
inline int thread_count(int requested = 0) {
  if (const char* env = std::getenv("GYROSCALE_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs f(i) for i in [0, n) on the resolved worker count. Work is handed out
// in chunks through an atomic cursor; callers must write results by index so
// the outcome does not depend on scheduling.
template <class F>
void parallel_for(int n, F&& f, int requested_threads = 0) {
  const int workers = std::min(thread_count(requested_threads), n > 0 ? n : 1);
  if (n <= 0) return;
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<int> cursor{0};
  const int chunk = std::max(1, n / (workers * 8));
  auto run = [&]() {
    for (;;) {
      const int begin = cursor.fetch_add(chunk);
      if (begin >= n) return;
      const int end = std::min(n, begin + chunk);
      for (int i = begin; i < end; ++i) f(i);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
}

// Fixed-chunk pairwise summation over materialized values: the reduction tree
// depends only on the value count, never on thread scheduling.
inline double pairwise_sum(const double* vals, int n) {
  constexpr int kChunk = 256;
  if (n <= kChunk) {
    if (n <= 8) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += vals[i];
      return s;
    }
    const int half = n / 2;
    return pairwise_sum(vals, half) + pairwise_sum(vals + half, n - half);
  }
  std::vector<double> partial;
  partial.reserve((n + kChunk - 1) / kChunk);
  for (int i = 0; i < n; i += kChunk) partial.push_back(pairwise_sum(vals + i, std::min(kChunk, n - i)));
  return pairwise_sum(partial.data(), static_cast<int>(partial.size()));
}

inline double pairwise_sum(const std::vector<double>& vals) {
  return pairwise_sum(vals.data(), static_cast<int>(vals.size()));
}

}  // namespace gyroscale

#endif  // GYROSCALE_PARALLEL
