#include "trailscan/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <utility>
#include <vector>

#include "trailscan/analysis.hpp"
#include "trailscan/detectors.hpp"
#include "trailscan/family.hpp"
#include "trailscan/graph.hpp"
#include "trailscan/mc.hpp"
#include "trailscan/parallel.hpp"
#include "trailscan/prior.hpp"
#include "trailscan/rng.hpp"
#include "trailscan/stats.hpp"

namespace trailscan {

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

struct Checker {
  std::vector<CheckResult> results;

  void run(const std::string& name,
           const std::function<std::pair<bool, std::string>()>& body) {
    CheckResult r;
    r.name = name;
    try {
      auto [pass, detail] = body();
      r.pass = pass;
      r.detail = std::move(detail);
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
};

double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// E0 exp(theta X) for the standard normal base law, by quadrature only (an
// oracle independent of Family::psi).
double quad_gauss_mgf(double theta) {
  auto f = [&](double x) {
    return std::exp(theta * x - 0.5 * x * x) / std::sqrt(2.0 * kPi);
  };
  return simpson(f, theta - 16.0, theta + 16.0, 20000);
}

// Weighted average over every enumerated path of the null expectation of the
// path's likelihood contribution; the quadrature factor is per node.
double enum_martingale_mean(const Family& fam, double theta, int m) {
  const double factor = quad_gauss_mgf(theta) * std::exp(-fam.psi(theta));
  const int64_t n_paths = int64_t{1} << (m - 1);
  const double weight = std::ldexp(1.0, -(m - 1));
  double avg = 0.0;
  for (int64_t code = 0; code < n_paths; ++code)
    avg += weight * std::pow(factor, m);
  return avg;
}

void add_fast_checks(Checker& ck, uint64_t master_seed) {
  ck.run("normal quantile inverts the cdf", [] {
    double worst = std::abs(normal_quantile(0.95) - 1.6448536269514727);
    for (double p : {0.01, 0.2, 0.5, 0.8, 0.999})
      worst = std::max(worst, std::abs(normal_cdf(normal_quantile(p)) - p));
    return std::make_pair(worst <= 1e-9, fmt("max deviation %.3g", worst));
  });

  ck.run("layer weights sum to one", [] {
    const int m = 1000;
    const double lam = was_lambda(m);
    double s = 0.0;
    for (int i = m - 1; i >= 0; --i) s += lam / (i + 1);
    return std::make_pair(std::abs(s - 1.0) <= 1e-12,
                          fmt("sum %.15f", s));
  });

  ck.run("analytic 95% shift table", [] {
    const int ms[] = {1025, 2049, 4097, 8193, 16385, 32769};
    const double want[] = {1.20, 1.15, 1.10, 1.06, 1.03, 0.99};
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
      worst = std::max(worst, std::abs(was_mu95(ms[i]) - want[i]));
    return std::make_pair(worst <= 0.01, fmt("max deviation %.4f", worst));
  });

  ck.run("sweep matches path enumeration", [&] {
    const Family fam = Family::gaussian();
    const BayesParams params{fam, 0.3};
    double worst = 0.0;
    int idx = 0;
    for (GraphKind kind : {GraphKind::lattice2d, GraphKind::tree}) {
      for (int m = 2; m <= 6; ++m) {
        const LayeredDag g = LayeredDag::build(kind, m);
        for (int rep = 0; rep < 5; ++rep) {
          Rng rng = make_rng(seed_derive(master_seed, 1000 + idx++));
          const NodeField field = sample_null_field(g, fam, rng);
          const double a = bayes_lr_dp(field, params);
          const double b = bayes_lr_bruteforce(field, params);
          worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
          const double c = glrt_max_dp(field);
          const double d = glrt_max_bruteforce(field);
          worst = std::max(worst, std::abs(c - d) / std::max(1.0, std::abs(d)));
        }
      }
    }
    return std::make_pair(worst <= 1e-9, fmt("max relative error %.3g", worst));
  });

  ck.run("lattice crossing law matches enumeration", [] {
    double worst = 0.0;
    for (int n = 1; n <= 8; ++n) {
      const CrossingLaw a = lattice_crossing_pmf(n);
      const CrossingLaw b = lattice_crossing_enum(n);
      for (int k = 0; k <= n; ++k)
        worst = std::max(worst, std::abs(a.prob(k) - b.prob(k)));
    }
    return std::make_pair(worst <= 1e-12, fmt("max pmf deviation %.3g", worst));
  });

  ck.run("crossing laws are normalized", [] {
    double worst = 0.0;
    for (int n : {10, 200})
      worst = std::max(worst, std::abs(lattice_crossing_pmf(n).sum() - 1.0));
    for (int m : {5, 16})
      worst = std::max(worst, std::abs(tree_crossing_pmf(m).sum() - 1.0));
    return std::make_pair(worst <= 1e-12, fmt("max |sum-1| %.3g", worst));
  });

  ck.run("crossing counts on hand-built paths", [] {
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, 3);
    PathSteps p{GraphKind::lattice2d, 3, 1, {1, 1}};
    PathSteps q{GraphKind::lattice2d, 3, 1, {-1, -1}};
    const bool ok1 = crossing_count(g, p, p) == 3 && crossing_count(g, p, q) == 1;
    const LayeredDag t = LayeredDag::build(GraphKind::tree, 3);
    PathSteps tp{GraphKind::tree, 3, 1, {0, 0}};
    PathSteps tq{GraphKind::tree, 3, 1, {0, 1}};
    const bool ok2 = crossing_count(t, tp, tq) == 2 && crossing_count(t, tp, tp) == 3;
    return std::make_pair(ok1 && ok2, std::string("lattice and tree agree"));
  });

  ck.run("tree variance closed form matches pmf sum", [] {
    const double mu = 0.5;
    const int m = 10;
    const double v = tree_var_lm(mu, m);
    const CrossingLaw law = tree_crossing_pmf(m);
    double s = 0.0;
    for (int k = 1; k <= m; ++k) s += law.prob(k) * std::exp(mu * mu * k);
    s -= 1.0;
    const bool ok = std::abs(v - s) <= 1e-12 && std::abs(v - 0.7839562529) <= 2e-9;
    return std::make_pair(ok, fmt("closed %.10f, pmf sum %.10f", v, s));
  });

  ck.run("upper bound dominates the crossing law", [] {
    const int n = 10;
    const CrossingLaw law = lattice_crossing_pmf(n);
    double min_ratio = 1e300;
    for (int k = 1; k <= n; ++k)
      min_ratio = std::min(min_ratio,
                           lattice_crossing_upper(k, n, 0.4) / law.prob(k));
    return std::make_pair(min_ratio >= 1.0, fmt("min ratio %.4f", min_ratio));
  });

  ck.run("optimal tilt per family", [] {
    const ThetaStar tg = theta_star(Family::gaussian());
    const ThetaStar te = theta_star(Family::exponential());
    const ThetaStar tb = theta_star(Family::bernoulli());
    const bool ok = !tg.unbounded &&
                    std::abs(tg.value - std::sqrt(2.0 * std::log(2.0))) <= 1e-6 &&
                    !te.unbounded && std::abs(te.value - 0.626635382298) <= 1e-5 &&
                    std::abs(te.f_min - 2.678346990017) <= 1e-9 && tb.unbounded;
    return std::make_pair(
        ok, fmt("gaussian %.7f, exponential %.7f (rate %.7f), bernoulli %s",
                tg.value, te.value, te.f_min,
                tb.unbounded ? "unbounded" : "bounded"));
  });

  ck.run("rate transform reference values", [] {
    const double fe = f_rate(Family::exponential(), 0.5);
    const double fb = f_rate(Family::bernoulli(), 1.0);
    const bool ok = std::abs(fe - 2.7725887222) <= 1e-9 &&
                    std::abs(fb - 1.3132616875) <= 1e-9;
    return std::make_pair(ok, fmt("exp %.10f, bernoulli %.10f", fe, fb));
  });

  ck.run("tilt envelope is one half at the critical rate", [] {
    const ThetaStar tg = theta_star(Family::gaussian());
    const ThetaStar te = theta_star(Family::exponential());
    const double xg = xi_inf(Family::gaussian(), tg.f_min);
    const double xe = xi_inf(Family::exponential(), te.f_min);
    const bool ok = std::abs(xg - 0.5) <= 1e-6 && std::abs(xe - 0.5) <= 1e-6;
    return std::make_pair(ok, fmt("gaussian %.8f, exponential %.8f", xg, xe));
  });

  ck.run("second-moment ratio on the exponential family", [] {
    const Family fam = Family::exponential();
    const double lam = lambda_ratio(fam, 0.2);
    const double al = alpha(fam, 0.2);
    const double c2 = chi_square(fam, 0.2);
    const bool ok = std::abs(lam - 16.0 / 15.0) <= 1e-12 &&
                    std::abs(al - 0.2540443291) <= 1e-9 &&
                    std::abs(c2 - 1.0 / 15.0) <= 1e-12;
    return std::make_pair(ok, fmt("lambda %.12f, alpha %.10f", lam, al));
  });

  ck.run("band node counts", [] {
    const bool ok = strip_node_count(5, 1) == 7 &&
                    strip_node_count(129, 22) == 2661 &&
                    strip_node_count(1025, 64) == 64065;
    return std::make_pair(
        ok, fmt("(5,1)=%lld (129,22)=%lld (1025,64)=%lld",
                static_cast<long long>(strip_node_count(5, 1)),
                static_cast<long long>(strip_node_count(129, 22)),
                static_cast<long long>(strip_node_count(1025, 64))));
  });

  ck.run("likelihood ratio is a martingale (enumeration)", [] {
    const double avg = enum_martingale_mean(Family::gaussian(), 0.2, 6);
    return std::make_pair(std::abs(avg - 1.0) <= 1e-9,
                          fmt("weighted average %.12f", avg));
  });

  ck.run("prediction profile bound closed form", [] {
    const ProfileBound b = pred_profile_bound(1024, hm_sequence(4096));
    const ProfileBound v = pred_profile_bound(1, {});
    const bool ok = !b.vacuous && std::abs(b.value - 0.703125) <= 1e-12 &&
                    v.vacuous && v.value == 1.0;
    return std::make_pair(ok, fmt("bound %.6f", b.value));
  });

  ck.run("independent-layer crossing mgf", [] {
    const double v = indep_uniform_mgf(0.04, 2);
    const bool ok = std::abs(v - 1.0620489209) <= 1e-9 &&
                    std::abs(indep_uniform_mgf(0.0, 7) - 1.0) <= 1e-15 &&
                    std::abs(indep_uniform_mgf(0.3, 1) - std::exp(0.3)) <= 1e-12;
    return std::make_pair(ok, fmt("mgf(0.04, 2) = %.10f", v));
  });

  ck.run("risk floor endpoints", [] {
    const bool ok = bayes_risk_lb(0.0) == 1.0 && bayes_risk_lb(4.0) == 0.0 &&
                    std::abs(bayes_risk_lb(1.0) - 0.5) <= 1e-15;
    return std::make_pair(ok, std::string("0 -> 1, 1 -> 1/2, 4 -> 0"));
  });

  ck.run("tree max-statistic tail bound values", [] {
    const double b1 = tree_glrt_type1_bound(1);
    const double b16 = tree_glrt_type1_bound(16);
    const bool ok = std::abs(b1 - 0.1694151879) <= 1e-9 &&
                    std::abs(b16 - 0.0423537970) <= 1e-9;
    return std::make_pair(ok, fmt("m=1 %.10f, m=16 %.10f", b1, b16));
  });

  ck.run("second-moment detectability threshold", [] {
    const bool ok = nondetectability_criterion(1.0, 0.49) &&
                    !nondetectability_criterion(1.0, 0.5) &&
                    nondetectability_criterion(0.9, 0.5);
    return std::make_pair(ok, std::string("chi2 vs 1/eta - 1 ordering"));
  });

  ck.run("scale amplitudes keep probabilities interior", [&] {
    const std::vector<double> a = hm_sequence(4096);
    double total = 0.0;
    for (double v : a) total += v;
    Rng rng = make_rng(seed_derive(master_seed, 77));
    const std::vector<double> env = hm_environment(a, 4096, rng);
    bool interior = env.size() == 4095;
    for (double p : env) interior = interior && p > 0.0 && p < 1.0;
    return std::make_pair(total < 0.5 && interior,
                          fmt("sum a = %.6f over %zu scales", total, a.size()));
  });
}

void add_full_checks(Checker& ck, uint64_t master_seed, int threads) {
  ck.run("lattice crossings match the law empirically", [&] {
    const int m = 21;
    const int64_t pairs = 20000;
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, m);
    const CrossingLaw law = lattice_crossing_pmf(m - 1);
    std::vector<int64_t> hist(static_cast<size_t>(m), 0);
    Rng rng = make_rng(seed_derive(master_seed, 2001));
    for (int64_t i = 0; i < pairs; ++i) {
      const PriorSample a = sample_prior_path(PriorSpec::uniform(), g, rng);
      const PriorSample b = sample_prior_path(PriorSpec::uniform(), g, rng);
      ++hist[static_cast<size_t>(crossing_count(g, a, b) - 1)];
    }
    double tv = 0.0;
    for (int k = 0; k <= m - 1; ++k)
      tv += std::abs(static_cast<double>(hist[k]) / pairs - law.prob(k));
    tv /= 2.0;
    return std::make_pair(tv < 0.015, fmt("TV distance %.4f", tv));
  });

  ck.run("tree crossings match the law empirically", [&] {
    const int m = 10;
    const int64_t pairs = 20000;
    const LayeredDag g = LayeredDag::build(GraphKind::tree, m);
    const CrossingLaw law = tree_crossing_pmf(m);
    std::vector<int64_t> hist(static_cast<size_t>(m + 1), 0);
    Rng rng = make_rng(seed_derive(master_seed, 2002));
    for (int64_t i = 0; i < pairs; ++i) {
      const PriorSample a = sample_prior_path(PriorSpec::uniform(), g, rng);
      const PriorSample b = sample_prior_path(PriorSpec::uniform(), g, rng);
      ++hist[static_cast<size_t>(crossing_count(g, a, b))];
    }
    double tv = 0.0;
    for (int k = 0; k <= m; ++k)
      tv += std::abs(static_cast<double>(hist[k]) / pairs - law.prob(k));
    tv /= 2.0;
    return std::make_pair(tv < 0.015, fmt("TV distance %.4f", tv));
  });

  ck.run("likelihood ratio is a martingale (simulation)", [&] {
    const int m = 200;
    const int64_t n = 4000;
    const Family fam = Family::gaussian();
    const BayesParams params{fam, 0.2};
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, m);
    std::vector<double> lr(static_cast<size_t>(n));
    run_striped(n, threads, [&] {
      NodeField field = make_field(g);
      return [&, field = std::move(field)](int64_t t) mutable {
        Rng rng = make_rng(seed_derive(master_seed, 3000 + t));
        fill_null(field, fam, rng);
        lr[static_cast<size_t>(t)] = std::exp(bayes_lr_dp(field, params));
      };
    });
    const MeanSe ms = mean_se(lr);
    const double dev = std::abs(ms.mean - 1.0);
    return std::make_pair(dev <= 5.0 * ms.se,
                          fmt("mean %.4f, se %.4f", ms.mean, ms.se));
  });

  ck.run("calibration recovers the normal quantile", [&] {
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, 2);
    const CalibrationResult cal =
        calibrate(make_root_detector(), g, Family::gaussian(), 0.05, 10000,
                  seed_derive(master_seed, 2101), threads);
    const bool ok = std::abs(cal.threshold - 1.6449) <= 0.05 &&
                    cal.alpha_hat > 0.03 && cal.alpha_hat < 0.07;
    return std::make_pair(
        ok, fmt("threshold %.4f, alpha_hat %.4f", cal.threshold, cal.alpha_hat));
  });

  ck.run("calibrated threshold matches the analytic null law", [&] {
    const int m = 129;
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, m);
    const CalibrationResult cal =
        calibrate(make_was_detector(), g, Family::gaussian(), 0.05, 4000,
                  seed_derive(master_seed, 2102), threads);
    const double want =
        normal_quantile(0.95) * std::sqrt(was_null_law(m).variance);
    const bool ok = std::abs(cal.threshold - want) <= 0.045;
    return std::make_pair(ok,
                          fmt("threshold %.4f vs %.4f", cal.threshold, want));
  });

  ck.run("null power equals the level", [&] {
    const int m = 129;
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, m);
    const double thr =
        normal_quantile(0.95) * std::sqrt(was_null_law(m).variance);
    const PathSource src = PathSource::from_prior(PriorSpec::uniform());
    const PowerEstimate p =
        estimate_power(make_was_detector(), thr, g, Family::gaussian(), 0.0,
                       src, 4000, seed_derive(master_seed, 2103), threads);
    return std::make_pair(std::abs(p.power - 0.05) <= 0.011,
                          fmt("power %.4f at level 0.05", p.power));
  });

  ck.run("crossing variance estimator matches the closed form", [&] {
    const LayeredDag g = LayeredDag::build(GraphKind::tree, 10);
    const VarEstimate est =
        var_lm_from_crossings(PriorSpec::uniform(), g, 0.5, 200000,
                              seed_derive(master_seed, 2104), threads);
    const double want = tree_var_lm(0.5, 10);
    const bool ok =
        !est.capped && std::abs(est.value - want) <= 4.0 * est.se;
    return std::make_pair(
        ok, fmt("estimate %.5f (se %.5f) vs %.5f", est.value, est.se, want));
  });

  ck.run("prediction profile bound holds in simulation", [&] {
    const std::vector<double> a = hm_sequence(4096);
    const ProfileBound bound = pred_profile_bound(1024, a);
    Rng rng = make_rng(seed_derive(master_seed, 2105));
    const ProfileEstimate est =
        pred_profile_estimate(PriorSpec::hm(a), 1024, 1024, 20, 10000, rng);
    const bool ok =
        !bound.vacuous && est.value <= bound.value + 3.0 * est.se;
    return std::make_pair(
        ok, fmt("max mass %.4f vs bound %.6f", est.value, bound.value));
  });

  ck.run("intersection tail fit recovers the tree law", [&] {
    // paths only, no node fields, so the depth-40 tree is fine with a
    // raised node cap
    const LayeredDag g =
        LayeredDag::build(GraphKind::tree, 40, 1, int64_t{1} << 41);
    Rng rng = make_rng(seed_derive(master_seed, 2106));
    const TailFit fit =
        intersection_tail_fit(PriorSpec::uniform(), g, 30000, rng);
    const bool ok = fit.eta > 0.45 && fit.eta < 0.55 && fit.C > 1.6 &&
                    fit.C < 2.4;
    return std::make_pair(
        ok, fmt("eta %.4f, C %.4f over %d points", fit.eta, fit.C, fit.points));
  });

  ck.run("simulated risk respects the variance floor", [&] {
    const LayeredDag g = LayeredDag::build(GraphKind::tree, 10);
    const RiskEstimate mc =
        bayes_risk_mc(g, Family::gaussian(), 0.5, PriorSpec::uniform(), 2000,
                      seed_derive(master_seed, 2107), threads);
    const double floor = bayes_risk_lb(tree_var_lm(0.5, 10));
    const bool ok = mc.risk + 3.0 * mc.se >= floor;
    return std::make_pair(
        ok, fmt("risk %.4f (se %.4f) vs floor %.4f", mc.risk, mc.se, floor));
  });

  ck.run("band shortcut agrees with the full field", [&] {
    const int m = 129;
    const int width = 22;
    const double mu = 0.6;
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, m);
    const CalibrationResult cal =
        calibrate(make_strip_detector(width), g, Family::gaussian(), 0.05,
                  4000, seed_derive(master_seed, 2108), threads);
    const PathSource src = PathSource::from_prior(PriorSpec::uniform());
    const PowerEstimate full =
        estimate_power(make_strip_detector(width), cal.threshold, g,
                       Family::gaussian(), mu, src, 4000,
                       seed_derive(master_seed, 2109), threads);
    const PowerEstimate fast = fast_strip_power(
        m, width, mu, 0.05, 4000, seed_derive(master_seed, 2110));
    const double tol =
        3.0 * std::sqrt(full.se * full.se + fast.se * fast.se) + 0.01;
    return std::make_pair(
        std::abs(full.power - fast.power) <= tol,
        fmt("full %.4f vs shortcut %.4f", full.power, fast.power));
  });

  ck.run("results are independent of thread count", [&] {
    const int m = 65;
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, m);
    const CalibrationResult a =
        calibrate(make_was_detector(), g, Family::gaussian(), 0.05, 500,
                  seed_derive(master_seed, 2111), 1);
    const CalibrationResult b =
        calibrate(make_was_detector(), g, Family::gaussian(), 0.05, 500,
                  seed_derive(master_seed, 2111), 3);
    const bool ok = a.threshold == b.threshold && a.alpha_hat == b.alpha_hat;
    return std::make_pair(ok, fmt("thresholds %.6f and %.6f", a.threshold,
                                  b.threshold));
  });
}

}  // namespace

std::vector<CheckResult> verify_fast(uint64_t master_seed, int threads) {
  (void)threads;
  Checker ck;
  add_fast_checks(ck, master_seed);
  return ck.results;
}

std::vector<CheckResult> verify_full(uint64_t master_seed, int threads) {
  Checker ck;
  add_fast_checks(ck, master_seed);
  add_full_checks(ck, master_seed, threads);
  return ck.results;
}

int print_check_report(std::ostream& out,
                       const std::vector<CheckResult>& checks) {
  int failures = 0;
  for (const CheckResult& c : checks) {
    out << (c.pass ? "[ ok ] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) out << ": " << c.detail;
    out << "\n";
    if (!c.pass) ++failures;
  }
  out << checks.size() - failures << "/" << checks.size() << " checks passed\n";
  return failures;
}

}  // namespace trailscan
