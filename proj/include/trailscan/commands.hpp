#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace trailscan {

struct RunOptions {
  std::string config_path;
  std::string out_dir = "out";
  uint64_t seed = 1;
  int threads = 0;  // 0 = TRAILSCAN_THREADS, then hardware
  bool svg = false;
  std::string format = "both";  // csv | json | both
};

// Requested thread count, falling back to the TRAILSCAN_THREADS environment
// variable and then to hardware concurrency.
int resolve_threads(int requested);

// Closed-form report: optimal tilt, rate minimum, mean shift, second-moment
// ratios, the analytic 95% shift table, and the tree max-statistic bound.
int cmd_theory(const std::string& family, const std::vector<int>& was_ms,
               double alpha, std::ostream& out);

// Calibrate + power over the config grid; writes CSV/JSON/SVG and a manifest.
int cmd_power(const RunOptions& opt, std::ostream& out);

// Bisection for the 95%-power shift per (detector, m) cell.
int cmd_mu95(const RunOptions& opt, std::ostream& out);

// level is "fast" or "full"; returns nonzero when any check fails.
int cmd_verify(const std::string& level, uint64_t seed, int threads,
               std::ostream& out);

}  // namespace trailscan
