#pragma once

#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace trailscan {

// Runs one callable per trial index in [0, n), striped across `threads`
// workers. make_worker() is invoked once per worker so each can own scratch
// buffers; results must be written to per-trial slots so that the outcome is
// independent of scheduling.
template <class MakeWorker>
void run_striped(int64_t n, int threads, MakeWorker&& make_worker) {
  if (threads < 1) threads = 1;
  if (threads == 1 || n < 2) {
    auto w = make_worker();
    for (int64_t t = 0; t < n; ++t) w(t);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(threads));
  for (int k = 0; k < threads; ++k) {
    pool.emplace_back([&make_worker, k, n, threads] {
      auto w = make_worker();
      for (int64_t t = k; t < n; t += threads) w(t);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace trailscan
