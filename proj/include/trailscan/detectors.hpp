#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "trailscan/family.hpp"
#include "trailscan/graph.hpp"

namespace trailscan {

struct BayesParams {
  Family family;
  double theta = 0.0;
};

// Prior-averaged likelihood ratio over all paths, uniform path prior,
// computed by a layer sweep in log space. Returns log L.
double bayes_lr_dp(const NodeField& field, const BayesParams& params);
// Direct log-sum-exp over every path; path count limited to 2^20.
double bayes_lr_bruteforce(const NodeField& field, const BayesParams& params);

// Maximum path sum via the same sweep with max in place of sum.
double glrt_max_dp(const NodeField& field);
double glrt_max_bruteforce(const NodeField& field);

struct StripValue {
  double value = 0.0;
  int64_t n_strip = 0;
};
// Sum of values in the centered band |j| <= min(i, strip_width) of the 2d
// lattice, plus the node count of that band.
StripValue strip_statistic(const NodeField& field, int strip_width);
int64_t strip_node_count(int m, int strip_width);
int strip_visit_count(const PathSteps& p, int strip_width);
int default_strip_width(int m);  // floor(2 sqrt(m))

// Weighted average statistic: weight lambda_m/(i+1) per layer-i node with
// lambda_m = 1/H_m, so the weights sum to one along any path.
double was_lambda(int m);
double was_statistic(const NodeField& field);

struct NullLaw {
  double mean = 0.0;
  double variance = 0.0;
};
NullLaw was_null_law(int m);
double was_mu95(int m, double alpha = 0.05, double beta = 0.95);

struct Detector {
  std::string name;
  std::function<double(const NodeField&)> eval;
};

Detector make_bayes_detector(const Family& fam, double theta);
Detector make_glrt_detector();
Detector make_strip_detector(int strip_width);
Detector make_was_detector();
Detector make_root_detector();  // origin value alone; calibration sanity hook

}  // namespace trailscan
