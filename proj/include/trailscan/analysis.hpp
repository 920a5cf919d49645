#pragma once

#include <cstdint>

#include "trailscan/family.hpp"
#include "trailscan/graph.hpp"
#include "trailscan/prior.hpp"

namespace trailscan {

struct VarEstimate {
  double value = 0.0;
  double se = 0.0;
  bool capped = false;  // some exp(alpha^2 N) exceeded exp(700); value is a floor
};

// Monte Carlo likelihood-ratio variance E exp(alpha_theta^2 N) - 1 over
// crossing counts N of independent prior path pairs.
VarEstimate var_lm_from_crossings(const PriorSpec& spec, const LayeredDag& g,
                                  double alpha_theta, int64_t n,
                                  uint64_t master_seed, int threads = 1);

// Closed form for the uniform tree prior: tau = e^(mu^2)/2,
// (2 tau - 1)(1 - tau^m)/(1 - tau), with the tau = 1 limit m.
double tree_var_lm(double mu, int m);

// Risk floor from the likelihood-ratio variance: max(0, 1 - sqrt(var)/2).
double bayes_risk_lb(double variance);

struct RiskEstimate {
  double risk = 0.0;
  double se = 0.0;
  double type1 = 0.0;
  double type2 = 0.0;
};
// Sum of both error rates of the likelihood-ratio test at threshold L = 1
// (reject when log L >= 0), n trials per hypothesis.
RiskEstimate bayes_risk_mc(const LayeredDag& g, const Family& fam, double theta,
                           const PriorSpec& prior, int64_t n,
                           uint64_t master_seed, int threads = 1);

// Union bound on P0(max path sum >= m sqrt(2 log 2)) for the binary tree.
double tree_glrt_type1_bound(int m);

// True when chi2 < 1/eta - 1: detection power is capped for priors with an
// exponential intersection tail at eta.
bool nondetectability_criterion(double chi2, double eta);

}  // namespace trailscan
