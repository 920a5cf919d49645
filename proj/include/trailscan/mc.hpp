#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "trailscan/detectors.hpp"
#include "trailscan/graph.hpp"
#include "trailscan/prior.hpp"

namespace trailscan {

// Where H1 trials get their path: a fixed step sequence or a fresh prior
// draw per trial.
class PathSource {
 public:
  static PathSource fixed(PathSteps steps);
  static PathSource from_prior(PriorSpec spec);

  std::vector<NodeRef> sample(const LayeredDag& g, Rng& rng) const;
  bool is_fixed() const { return fixed_.has_value(); }
  const PriorSpec& prior() const { return prior_; }

 private:
  std::optional<PathSteps> fixed_;
  PriorSpec prior_;
};

struct CalibrationResult {
  double threshold = 0.0;
  double alpha_hat = 0.0;
  int64_t n_trials = 0;
};

struct PowerEstimate {
  double power = 0.0;
  double se = 0.0;
  int64_t n_trials = 0;
};

// Null-simulation threshold at the ceil((1-alpha) n)-th order statistic;
// rejection is strict exceedance.
CalibrationResult calibrate(const Detector& det, const LayeredDag& g,
                            const Family& fam, double alpha, int64_t n,
                            uint64_t master_seed, int threads = 1);

PowerEstimate estimate_power(const Detector& det, double threshold,
                             const LayeredDag& g, const Family& fam,
                             double theta, const PathSource& src, int64_t n,
                             uint64_t master_seed, int threads = 1);

struct Mu95Result {
  double theta = 0.0;            // bracket midpoint
  double lo = 0.0, hi = 0.0;     // final bracket
  PowerEstimate power_lo, power_hi;
  double threshold = 0.0;        // from the last calibration used
  double alpha_hat = 0.0;
};

// Bisection for the parameter reaching `target` power. detector_for(theta)
// supplies the statistic; recalibrate_per_theta re-runs calibration at each
// probe (needed when the statistic itself depends on theta).
Mu95Result mu95_search(const std::function<Detector(double)>& detector_for,
                       bool recalibrate_per_theta, const LayeredDag& g,
                       const Family& fam, const PathSource& src, double alpha,
                       double target, int64_t n_calib, int64_t n_power,
                       double lo, double hi, double tol, uint64_t master_seed,
                       int threads = 1);

// Strip-band power for the unit-variance Gaussian instance without node
// fields: one band-visit count per replicate plus the exact N(0, n_strip)
// null law.
PowerEstimate fast_strip_power(int m, int strip_width, double mu, double alpha,
                               int64_t n_R, uint64_t master_seed);

}  // namespace trailscan
