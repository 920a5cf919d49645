#include "trailscan/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "trailscan/parallel.hpp"
#include "trailscan/stats.hpp"

namespace trailscan {

PathSource PathSource::fixed(PathSteps steps) {
  PathSource s;
  s.fixed_ = std::move(steps);
  return s;
}

PathSource PathSource::from_prior(PriorSpec spec) {
  PathSource s;
  s.prior_ = std::move(spec);
  return s;
}

std::vector<NodeRef> PathSource::sample(const LayeredDag& g, Rng& rng) const {
  if (fixed_) return path_vertices(g, *fixed_);
  return sample_prior_path(prior_, g, rng).vertices;
}

namespace {

int64_t threshold_rank(double alpha, int64_t n) {
  auto r = static_cast<int64_t>(
      std::ceil((1.0 - alpha) * static_cast<double>(n) - 1e-9));
  return std::clamp<int64_t>(r, 1, n);
}

}  // namespace

CalibrationResult calibrate(const Detector& det, const LayeredDag& g,
                            const Family& fam, double alpha, int64_t n,
                            uint64_t master_seed, int threads) {
  if (n < 100) throw std::invalid_argument("calibrate: need n >= 100");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("calibrate: alpha must be in (0,1)");
  }
  std::vector<double> values(static_cast<size_t>(n));
  run_striped(n, threads, [&] {
    NodeField field = make_field(g);
    return [&, field = std::move(field)](int64_t t) mutable {
      Rng rng = make_rng(seed_derive(master_seed, static_cast<uint64_t>(t)));
      fill_null(field, fam, rng);
      values[static_cast<size_t>(t)] = det.eval(field);
    };
  });
  std::vector<double> sorted(values);
  std::sort(sorted.begin(), sorted.end());
  double threshold = sorted[static_cast<size_t>(threshold_rank(alpha, n) - 1)];
  int64_t exceed = 0;
  for (double v : values) exceed += (v > threshold);
  return CalibrationResult{threshold,
                           static_cast<double>(exceed) / static_cast<double>(n),
                           n};
}

PowerEstimate estimate_power(const Detector& det, double threshold,
                             const LayeredDag& g, const Family& fam,
                             double theta, const PathSource& src, int64_t n,
                             uint64_t master_seed, int threads) {
  if (n < 100) throw std::invalid_argument("estimate_power: need n >= 100");
  if (!fam.in_domain(theta)) {
    throw std::invalid_argument("estimate_power: theta outside family domain");
  }
  std::vector<uint8_t> hit(static_cast<size_t>(n), 0);
  run_striped(n, threads, [&] {
    NodeField field = make_field(g);
    return [&, field = std::move(field)](int64_t t) mutable {
      Rng rng = make_rng(seed_derive(master_seed, static_cast<uint64_t>(t)));
      fill_null(field, fam, rng);
      std::vector<NodeRef> path = src.sample(g, rng);
      plant_vertices(field, path, fam, theta, rng);
      hit[static_cast<size_t>(t)] = det.eval(field) > threshold ? 1 : 0;
    };
  });
  int64_t wins = 0;
  for (uint8_t h : hit) wins += h;
  double p = static_cast<double>(wins) / static_cast<double>(n);
  return PowerEstimate{p, binom_se(p, n), n};
}

Mu95Result mu95_search(const std::function<Detector(double)>& detector_for,
                       bool recalibrate_per_theta, const LayeredDag& g,
                       const Family& fam, const PathSource& src, double alpha,
                       double target, int64_t n_calib, int64_t n_power,
                       double lo, double hi, double tol, uint64_t master_seed,
                       int threads) {
  if (!(lo > 0.0 && hi > lo)) {
    throw std::invalid_argument("mu95_search: need 0 < lo < hi");
  }
  if (!(tol > 0.0)) throw std::invalid_argument("mu95_search: tol must be > 0");

  uint64_t stage = 0;
  CalibrationResult calib{};
  bool calibrated = false;
  auto power_at = [&](double theta, int64_t n) {
    if (!calibrated || recalibrate_per_theta) {
      calib = calibrate(detector_for(theta), g, fam, alpha, n_calib,
                        seed_derive(master_seed, stage++), threads);
      calibrated = true;
    }
    return estimate_power(detector_for(theta), calib.threshold, g, fam, theta,
                          src, n, seed_derive(master_seed, stage++), threads);
  };

  double edge = fam.domain_hi() - 1e-6;
  hi = std::min(hi, edge);
  PowerEstimate p_lo = power_at(lo, n_power);
  PowerEstimate p_hi = power_at(hi, n_power);
  int doublings = 0;
  while (p_hi.power < target) {
    if (++doublings > 20 || hi >= edge) {
      throw std::runtime_error("mu95_search: no bracket below the domain edge");
    }
    lo = hi;
    p_lo = p_hi;
    hi = std::min(2.0 * hi, edge);
    p_hi = power_at(hi, n_power);
  }
  while (p_lo.power >= target) {
    if (++doublings > 20) {
      throw std::runtime_error("mu95_search: no lower bracket found");
    }
    hi = lo;
    p_hi = p_lo;
    lo = 0.5 * lo;
    p_lo = power_at(lo, n_power);
  }

  int iters = static_cast<int>(std::ceil(std::log2((hi - lo) / tol)));
  for (int it = 0; it < iters; ++it) {
    // extra trials once the bracket is tight, where binomial noise dominates
    int64_t n = (it >= iters - 2) ? 2 * n_power : n_power;
    double mid = 0.5 * (lo + hi);
    PowerEstimate p_mid = power_at(mid, n);
    if (p_mid.power >= target) {
      hi = mid;
      p_hi = p_mid;
    } else {
      lo = mid;
      p_lo = p_mid;
    }
  }
  return Mu95Result{0.5 * (lo + hi), lo,         hi,
                    p_lo,            p_hi,       calib.threshold,
                    calib.alpha_hat};
}

PowerEstimate fast_strip_power(int m, int strip_width, double mu, double alpha,
                               int64_t n_R, uint64_t master_seed) {
  if (n_R < 1) throw std::invalid_argument("fast_strip_power: need n_R >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("fast_strip_power: alpha must be in (0,1)");
  }
  const int64_t n_strip = strip_node_count(m, strip_width);
  const double sd = std::sqrt(static_cast<double>(n_strip));
  const double threshold = normal_quantile(1.0 - alpha) * sd;
  std::vector<double> probs(static_cast<size_t>(n_R));
  for (int64_t r = 0; r < n_R; ++r) {
    Rng rng = make_rng(seed_derive(master_seed, static_cast<uint64_t>(r)));
    int64_t j = 0;
    int64_t visits = 1;
    for (int i = 1; i < m; ++i) {
      j += (rng() >> 63) ? 1 : -1;
      if (std::abs(j) <= std::min<int64_t>(i, strip_width)) ++visits;
    }
    probs[static_cast<size_t>(r)] =
        normal_sf((threshold - mu * static_cast<double>(visits)) / sd);
  }
  MeanSe ms = mean_se(probs);
  return PowerEstimate{ms.mean, ms.se, n_R};
}

}  // namespace trailscan
