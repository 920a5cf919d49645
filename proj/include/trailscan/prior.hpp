#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trailscan/graph.hpp"
#include "trailscan/rng.hpp"

namespace trailscan {

enum class PriorKind { uniform, hm, independent_uniform };

const char* to_string(PriorKind kind);
PriorKind prior_kind_from_name(const std::string& name);

struct PriorSpec {
  PriorKind kind = PriorKind::uniform;
  std::vector<double> a_seq;  // hm block amplitudes, indexed by scale j

  static PriorSpec uniform();
  static PriorSpec hm(std::vector<double> a_seq);
  static PriorSpec independent_uniform();
};

// One sampled hypothesis: a vertex per layer. Edge-connected except under
// independent_uniform, which draws layers independently; as_steps refuses to
// encode those.
struct PriorSample {
  std::vector<NodeRef> vertices;
  bool edge_path = true;

  PathSteps as_steps(const LayeredDag& g) const;
};

PriorSample sample_prior_path(const PriorSpec& spec, const LayeredDag& g,
                              Rng& rng);

// Block-structured random environment: p_i = 1/2 + sum_j U_j(block of i),
// U_j uniform on [-a_j, a_j] constant over blocks of length 2^j. Returns
// p_1..p_{m-1}; requires sum(a_seq) < 1/2 so every p_i stays in (0,1).
std::vector<double> hm_environment(const std::vector<double>& a_seq, int m,
                                   Rng& rng);
std::vector<double> hm_sequence(int m);  // a_j = 1/(3 log2 m) for j <= log2 m

int crossing_count(const LayeredDag& g, const PathSteps& p, const PathSteps& q);
int crossing_count(const LayeredDag& g, const PriorSample& p,
                   const PriorSample& q);

struct CrossingLaw {
  std::vector<double> pmf;  // indexed by crossing count
  double prob(int k) const {
    return (k >= 0 && k < static_cast<int>(pmf.size())) ? pmf[k] : 0.0;
  }
  double sum() const;
};

// Shared-vertex law for two independent uniform walks over the n post-origin
// layers: P(k) = C(2n-k, n) / 2^(2n-k), k = 0..n.
CrossingLaw lattice_crossing_pmf(int n);
CrossingLaw lattice_crossing_enum(int n);  // brute force over all 4^n pairs
double lattice_crossing_upper(int k, int n, double eps);
// Root-inclusive crossing law for two uniform tree paths of m layers:
// P(k) = 2^-k for k < m, P(m) = 2^-(m-1).
CrossingLaw tree_crossing_pmf(int m);

struct ProfileBound {
  double value = 1.0;
  bool vacuous = false;  // the indexed amplitude was missing or zero
};
ProfileBound pred_profile_bound(int64_t k, const std::vector<double>& a_seq);

struct ProfileEstimate {
  double value = 0.0;
  double se = 0.0;
};
// Statistical probe of sup_x P(position at step n+k = x | history to step n):
// samples histories, runs conditional continuations for each, reports the
// largest empirical point mass seen.
ProfileEstimate pred_profile_estimate(const PriorSpec& spec, int n, int k,
                                      int histories, int continuations,
                                      Rng& rng);

struct TailFit {
  double C = 0.0;
  double eta = 0.0;
  int points = 0;
};
// Least-squares fit of log P(N >= k) = log C + k log eta over the crossing
// counts of sampled path pairs, restricted to k with at least 30 tail hits.
TailFit intersection_tail_fit(const PriorSpec& spec, const LayeredDag& g,
                              int64_t samples, Rng& rng);

// E exp(t N) for layers picked independently and uniformly, one per layer,
// over m layers of sizes 1..m: product of (1 + (e^t - 1)/i).
double indep_uniform_mgf(double t, int m);

}  // namespace trailscan
