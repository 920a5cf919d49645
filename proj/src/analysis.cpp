#include "trailscan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "trailscan/detectors.hpp"
#include "trailscan/parallel.hpp"
#include "trailscan/rng.hpp"
#include "trailscan/stats.hpp"

namespace trailscan {

namespace {
constexpr double kLogCap = 700.0;  // exp(700) is near the double overflow edge
}

VarEstimate var_lm_from_crossings(const PriorSpec& spec, const LayeredDag& g,
                                  double alpha_theta, int64_t n,
                                  uint64_t master_seed, int threads) {
  if (n < 1) throw std::invalid_argument("var_lm_from_crossings: n must be >= 1");
  const double a2 = alpha_theta * alpha_theta;
  std::vector<double> log_terms(static_cast<size_t>(n));
  std::vector<uint8_t> hit_cap(static_cast<size_t>(n), 0);
  run_striped(n, threads, [&] {
    return [&](int64_t t) {
      Rng rng = make_rng(seed_derive(master_seed, t));
      PriorSample a = sample_prior_path(spec, g, rng);
      PriorSample b = sample_prior_path(spec, g, rng);
      const int64_t cross = crossing_count(g, a, b);
      double lt = a2 * static_cast<double>(cross);
      if (lt > kLogCap) {
        lt = kLogCap;
        hit_cap[static_cast<size_t>(t)] = 1;
      }
      log_terms[static_cast<size_t>(t)] = lt;
    };
  });

  const double log_n = std::log(static_cast<double>(n));
  const double log_mean = logsumexp(log_terms) - log_n;
  std::vector<double> log_sq(log_terms.size());
  for (size_t i = 0; i < log_terms.size(); ++i) log_sq[i] = 2.0 * log_terms[i];
  const double log_mean_sq = logsumexp(log_sq) - log_n;

  VarEstimate out;
  out.value = std::exp(log_mean) - 1.0;
  const double mean = std::exp(log_mean);
  const double var_of_term = std::max(0.0, std::exp(log_mean_sq) - mean * mean);
  out.se = std::sqrt(var_of_term / static_cast<double>(n));
  out.capped = std::any_of(hit_cap.begin(), hit_cap.end(),
                           [](uint8_t h) { return h != 0; });
  return out;
}

double tree_var_lm(double mu, int m) {
  if (m < 1) throw std::invalid_argument("tree_var_lm: m must be >= 1");
  const double tau = std::exp(mu * mu) / 2.0;
  if (std::abs(tau - 1.0) < 1e-12) return static_cast<double>(m);
  // (2 tau - 1) * (1 + tau + ... + tau^(m-1)), summed stably for either branch
  double geom = 0.0;
  double pw = 1.0;
  for (int i = 0; i < m; ++i) {
    geom += pw;
    pw *= tau;
  }
  return (2.0 * tau - 1.0) * geom;
}

double bayes_risk_lb(double variance) {
  if (variance < 0.0) throw std::invalid_argument("bayes_risk_lb: negative variance");
  return std::max(0.0, 1.0 - std::sqrt(variance) / 2.0);
}

RiskEstimate bayes_risk_mc(const LayeredDag& g, const Family& fam, double theta,
                           const PriorSpec& prior, int64_t n,
                           uint64_t master_seed, int threads) {
  if (n < 1) throw std::invalid_argument("bayes_risk_mc: n must be >= 1");
  const BayesParams params{fam, theta};
  std::vector<uint8_t> rej_null(static_cast<size_t>(n));
  std::vector<uint8_t> acc_alt(static_cast<size_t>(n));
  run_striped(n, threads, [&] {
    NodeField field = make_field(g);
    return [&, field = std::move(field)](int64_t t) mutable {
      Rng rng0 = make_rng(seed_derive(master_seed, 2 * t));
      fill_null(field, fam, rng0);
      rej_null[static_cast<size_t>(t)] =
          bayes_lr_dp(field, params) >= 0.0 ? 1 : 0;

      Rng rng1 = make_rng(seed_derive(master_seed, 2 * t + 1));
      fill_null(field, fam, rng1);
      PriorSample path = sample_prior_path(prior, g, rng1);
      plant_vertices(field, path.vertices, fam, theta, rng1);
      acc_alt[static_cast<size_t>(t)] =
          bayes_lr_dp(field, params) < 0.0 ? 1 : 0;
    };
  });

  int64_t n_rej = 0;
  int64_t n_acc = 0;
  for (int64_t t = 0; t < n; ++t) {
    n_rej += rej_null[static_cast<size_t>(t)];
    n_acc += acc_alt[static_cast<size_t>(t)];
  }
  RiskEstimate out;
  out.type1 = static_cast<double>(n_rej) / static_cast<double>(n);
  out.type2 = static_cast<double>(n_acc) / static_cast<double>(n);
  out.risk = out.type1 + out.type2;
  const double se1 = binom_se(out.type1, n);
  const double se2 = binom_se(out.type2, n);
  out.se = std::sqrt(se1 * se1 + se2 * se2);
  return out;
}

double tree_glrt_type1_bound(int m) {
  if (m < 1) throw std::invalid_argument("tree_glrt_type1_bound: m must be >= 1");
  return 1.0 / (4.0 * std::sqrt(kPi * static_cast<double>(m) * std::log(2.0)));
}

bool nondetectability_criterion(double chi2, double eta) {
  if (eta <= 0.0 || eta >= 1.0)
    throw std::invalid_argument("nondetectability_criterion: eta must be in (0,1)");
  if (chi2 < 0.0)
    throw std::invalid_argument("nondetectability_criterion: negative chi2");
  return chi2 < 1.0 / eta - 1.0;
}

}  // namespace trailscan
