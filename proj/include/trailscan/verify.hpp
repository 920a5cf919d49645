#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace trailscan {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Closed-form and enumeration invariants; runs in seconds.
std::vector<CheckResult> verify_fast(uint64_t master_seed, int threads = 1);

// Fast suite plus the Monte Carlo consistency checks.
std::vector<CheckResult> verify_full(uint64_t master_seed, int threads = 1);

// Prints one status line per check; returns the number of failures.
int print_check_report(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace trailscan
