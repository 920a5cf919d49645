// Acceptance gate: every release-blocking numeric claim as one pass/fail
// line. Exit status is 0 only when all criteria hold.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "trailscan/analysis.hpp"
#include "trailscan/commands.hpp"
#include "trailscan/detectors.hpp"
#include "trailscan/family.hpp"
#include "trailscan/graph.hpp"
#include "trailscan/mc.hpp"
#include "trailscan/prior.hpp"
#include "trailscan/rng.hpp"
#include "trailscan/stats.hpp"

using namespace trailscan;

namespace {

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i)
    s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// E exp(theta X) under the standard normal, by quadrature rather than the
// closed form, so the cumulant implementation is checked against it.
double quad_gauss_mgf(double theta) {
  auto f = [theta](double x) {
    return std::exp(theta * x - 0.5 * x * x) / std::sqrt(2.0 * kPi);
  };
  return simpson(f, theta - 16.0, theta + 16.0, 20000);
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;
int g_index = 0;

void run(const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = std::string("exception: ") + e.what();
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  ++g_index;
  if (!out.pass) ++g_failures;
  std::printf("[%s] %2d. %s: %s (%.1f s)\n", out.pass ? "PASS" : "FAIL",
              g_index, name.c_str(), out.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main() {
  const uint64_t seed = 20240814;
  const int threads = resolve_threads(0);
  const Family gauss = Family::gaussian();
  std::printf("acceptance run: seed %llu, %d thread(s)\n",
              static_cast<unsigned long long>(seed), threads);

  run("analytic 95%-power shift table", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const int ms[] = {1025, 2049, 4097, 8193, 16385, 32769};
    const double want[] = {1.20, 1.15, 1.10, 1.06, 1.03, 0.99};
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
      worst = std::max(worst, std::abs(was_mu95(ms[i]) - want[i]));
    const double secs = seconds_since(t0);
    return Outcome{worst <= 0.01 && secs < 1.0,
                   fmt("max deviation %.4f (tol 0.01)", worst)};
  });

  run("sweep statistics equal brute-force enumeration", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    uint64_t idx = 0;
    for (GraphKind kind : {GraphKind::lattice2d, GraphKind::tree}) {
      for (int m = 2; m <= 12; ++m) {
        const LayeredDag g = LayeredDag::build(kind, m);
        const BayesParams params{gauss, 0.3};
        for (int rep = 0; rep < 100; ++rep) {
          Rng rng = make_rng(seed_derive(seed + 2, idx++));
          const NodeField field = sample_null_field(g, gauss, rng);
          const double lb = bayes_lr_bruteforce(field, params);
          const double la = bayes_lr_dp(field, params);
          worst = std::max(worst,
                           std::abs(la - lb) / std::max(1.0, std::abs(lb)));
          const double gb = glrt_max_bruteforce(field);
          const double ga = glrt_max_dp(field);
          worst = std::max(worst,
                           std::abs(ga - gb) / std::max(1.0, std::abs(gb)));
        }
      }
    }
    const double secs = seconds_since(t0);
    return Outcome{worst <= 1e-9 && secs < 30.0,
                   fmt("2200 fields, worst relative error %.2e", worst)};
  });

  run("crossing laws match enumeration and simulation", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    double worst_abs = 0.0;
    for (int n = 1; n <= 12; ++n) {
      const CrossingLaw law = lattice_crossing_pmf(n);
      const CrossingLaw ref = lattice_crossing_enum(n);
      for (int k = 0; k <= n; ++k)
        worst_abs = std::max(worst_abs, std::abs(law.prob(k) - ref.prob(k)));
    }

    auto empirical_tv = [&](GraphKind kind, int m, uint64_t salt) {
      const LayeredDag g = LayeredDag::build(kind, m);
      const int64_t pairs = 100000;
      std::vector<int64_t> hist(static_cast<size_t>(m) + 1, 0);
      for (int64_t t = 0; t < pairs; ++t) {
        Rng rng = make_rng(seed_derive(seed + salt, t));
        const PriorSample a = sample_prior_path(PriorSpec::uniform(), g, rng);
        const PriorSample b = sample_prior_path(PriorSpec::uniform(), g, rng);
        ++hist[static_cast<size_t>(crossing_count(g, a, b))];
      }
      const CrossingLaw law = kind == GraphKind::tree
                                  ? tree_crossing_pmf(m)
                                  : lattice_crossing_pmf(m - 1);
      double tv = 0.0;
      for (int k = 1; k <= m; ++k) {
        const double want =
            kind == GraphKind::tree ? law.prob(k) : law.prob(k - 1);
        const double got =
            static_cast<double>(hist[static_cast<size_t>(k)]) / pairs;
        tv += std::abs(got - want);
      }
      return 0.5 * tv;
    };
    const double tv_lattice = empirical_tv(GraphKind::lattice2d, 21, 3);
    const double tv_tree = empirical_tv(GraphKind::tree, 10, 4);
    const double secs = seconds_since(t0);
    const bool ok = worst_abs <= 1e-12 && tv_lattice < 0.01 && tv_tree < 0.01 &&
                    secs < 60.0;
    return Outcome{ok, fmt("enum dev %.1e, TV lattice %.4f, TV tree %.4f",
                           worst_abs, tv_lattice, tv_tree)};
  });

  run("tail bound dominates the exact crossing law", [] {
    const auto t0 = std::chrono::steady_clock::now();
    double min_ratio = 1e300;
    for (int n : {10, 50, 200}) {
      const CrossingLaw law = lattice_crossing_pmf(n);
      for (int k = 1; k <= n; ++k)
        min_ratio =
            std::min(min_ratio, lattice_crossing_upper(k, n, 0.4) / law.prob(k));
    }
    const double secs = seconds_since(t0);
    return Outcome{min_ratio >= 1.0 && secs < 1.0,
                   fmt("min bound/pmf ratio %.4f", min_ratio)};
  });

  run("null likelihood ratio has unit mean", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, 200);
    const BayesParams params{gauss, 0.2};
    const int64_t n = 10000;
    std::vector<double> vals(static_cast<size_t>(n));
    NodeField field = make_field(g);
    for (int64_t t = 0; t < n; ++t) {
      Rng rng = make_rng(seed_derive(seed + 5, t));
      fill_null(field, gauss, rng);
      vals[static_cast<size_t>(t)] = std::exp(bayes_lr_dp(field, params));
    }
    const MeanSe ms = mean_se(vals);
    const bool sim_ok = std::abs(ms.mean - 1.0) <= 5.0 * ms.se;

    // independent route: quadrature MGF x enumerated path weights
    double worst_enum = 0.0;
    const double factor =
        quad_gauss_mgf(0.2) * std::exp(-gauss.psi(0.2));
    for (int m = 2; m <= 12; ++m) {
      const int64_t n_paths = int64_t{1} << (m - 1);
      const double weight = std::ldexp(1.0, -(m - 1));
      double avg = 0.0;
      for (int64_t code = 0; code < n_paths; ++code)
        avg += weight * std::pow(factor, m);
      worst_enum = std::max(worst_enum, std::abs(avg - 1.0));
    }
    const double secs = seconds_since(t0);
    const bool ok = sim_ok && worst_enum <= 1e-9 && secs < 120.0;
    return Outcome{ok, fmt("sim mean %.4f (se %.4f), enum dev %.1e", ms.mean,
                           ms.se, worst_enum)};
  });

  run("tree variance formula, identity, and simulation", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const double v = tree_var_lm(0.5, 10);
    const CrossingLaw law = tree_crossing_pmf(10);
    double ev = 0.0;
    for (int k = 1; k <= 10; ++k) ev += law.prob(k) * std::exp(0.25 * k);
    const double identity_dev = std::abs(v - (ev - 1.0));

    const LayeredDag g = LayeredDag::build(GraphKind::tree, 10);
    const VarEstimate mc =
        var_lm_from_crossings(PriorSpec::uniform(), g, 0.5, 1000000, seed + 6);
    const double secs = seconds_since(t0);
    const bool ok = std::abs(v - 0.78405) <= 1e-3 && identity_dev <= 1e-12 &&
                    !mc.capped && std::abs(mc.value - v) <= 3.0 * mc.se &&
                    secs < 60.0;
    return Outcome{ok, fmt("value %.6f, identity dev %.1e, mc %.4f (se %.4f)",
                           v, identity_dev, mc.value, mc.se)};
  });

  run("optimal tilt constants per family", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const ThetaStar te = theta_star(Family::exponential());
    const Family expo = Family::exponential();
    const double shift = expo.mean(te.value) - expo.mean(0.0);
    const ThetaStar tg = theta_star(Family::gaussian());
    const ThetaStar tb = theta_star(Family::bernoulli());
    const double secs = seconds_since(t0);
    const bool ok = !te.unbounded && std::abs(te.value - 0.6268) <= 0.005 &&
                    std::abs(shift - 1.68) <= 0.02 && !tg.unbounded &&
                    std::abs(tg.value - std::sqrt(2.0 * std::log(2.0))) <= 1e-6 &&
                    tb.unbounded && secs < 1.0;
    return Outcome{ok, fmt("exponential tilt %.4f shift %.4f, gaussian tilt "
                           "%.6f, bernoulli unbounded %d",
                           te.value, shift, tg.value, tb.unbounded ? 1 : 0)};
  });

  // criteria 8 and 9 share one large-lattice null calibration of the
  // max statistic, so keep the pieces outside the lambdas
  const LayeredDag big = LayeredDag::build(GraphKind::lattice2d, 1025);
  const PathSource drawn = PathSource::from_prior(PriorSpec::uniform());
  std::optional<CalibrationResult> glrt_cal;

  run("large-lattice power spot checks", [&] {
    const Detector bayes = make_bayes_detector(gauss, 0.37);
    const CalibrationResult cb =
        calibrate(bayes, big, gauss, 0.05, 2000, seed_derive(seed, 80), threads);
    const PowerEstimate pb =
        estimate_power(bayes, cb.threshold, big, gauss, 0.37, drawn, 2000,
                       seed_derive(seed, 81), threads);

    const PowerEstimate ps =
        fast_strip_power(1025, 64, 0.84, 0.05, 4000, seed_derive(seed, 82));

    const Detector glrt = make_glrt_detector();
    glrt_cal = calibrate(glrt, big, gauss, 0.05, 10000, seed_derive(seed, 83),
                         threads);
    const PowerEstimate pg =
        estimate_power(glrt, glrt_cal->threshold, big, gauss, 0.46, drawn,
                       1000, seed_derive(seed, 84), threads);

    const bool ok = pb.power >= 0.90 && pb.power <= 0.98 && ps.power >= 0.93 &&
                    ps.power <= 0.97 && pg.power >= 0.90 && pg.power <= 0.98;
    return Outcome{ok, fmt("bayes %.4f in [0.90,0.98], strip %.4f in "
                           "[0.93,0.97], glrt %.4f in [0.90,0.98]",
                           pb.power, ps.power, pg.power)};
  });

  run("max-statistic power on the increasing path", [&] {
    const CalibrationResult cal =
        glrt_cal ? *glrt_cal
                 : calibrate(make_glrt_detector(), big, gauss, 0.05, 10000,
                             seed_derive(seed, 83), threads);
    const PathSource inc = PathSource::fixed(increasing_path(big));
    const PowerEstimate p =
        estimate_power(make_glrt_detector(), cal.threshold, big, gauss, 0.90,
                       inc, 1000, seed_derive(seed, 90), threads);
    return Outcome{p.power >= 0.90 && p.power <= 0.98,
                   fmt("power %.4f in [0.90,0.98]", p.power)};
  });

  run("tree max-statistic false-alarm rate", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const int m = 16;
    const LayeredDag g = LayeredDag::build(GraphKind::tree, m);
    const double level = m * std::sqrt(2.0 * std::log(2.0));
    const int64_t n = 10000;
    int64_t hits = 0;
    NodeField field = make_field(g);
    for (int64_t t = 0; t < n; ++t) {
      Rng rng = make_rng(seed_derive(seed + 10, t));
      fill_null(field, gauss, rng);
      if (glrt_max_dp(field) >= level) ++hits;
    }
    const double p_hat = static_cast<double>(hits) / static_cast<double>(n);
    const double se = binom_se(p_hat, n);
    const double bound = tree_glrt_type1_bound(m);
    const double secs = seconds_since(t0);
    return Outcome{p_hat <= bound + 3.0 * se && secs < 60.0,
                   fmt("rate %.4f vs bound %.5f (se %.4f)", p_hat, bound, se)};
  });

  run("prediction profile under the blockwise prior", [&] {
    const std::vector<double> a = hm_sequence(4096);
    const ProfileBound bound = pred_profile_bound(1024, a);
    Rng rng = make_rng(seed_derive(seed + 11, 0));
    const ProfileEstimate est =
        pred_profile_estimate(PriorSpec::hm(a), 1024, 1024, 50, 10000, rng);
    const bool ok = !bound.vacuous &&
                    est.value <= bound.value + 3.0 * est.se &&
                    std::abs(bound.value - 0.70313) <= 1e-5;
    return Outcome{ok, fmt("largest point mass %.4f (se %.4f) vs bound %.5f",
                           est.value, est.se, bound.value)};
  });

  run("intersection tail exponent on the tree", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const LayeredDag g =
        LayeredDag::build(GraphKind::tree, 40, 1, int64_t{1} << 41);
    Rng rng = make_rng(seed_derive(seed + 12, 0));
    const TailFit fit =
        intersection_tail_fit(PriorSpec::uniform(), g, 100000, rng);
    const double secs = seconds_since(t0);
    const bool ok = fit.eta >= 0.48 && fit.eta <= 0.52 && fit.C >= 1.8 &&
                    fit.C <= 2.2 && secs < 60.0;
    return Outcome{ok, fmt("eta %.4f in [0.48,0.52], C %.4f in [1.8,2.2], "
                           "%d points",
                           fit.eta, fit.C, fit.points)};
  });

  std::printf("%d/%d criteria passed\n", g_index - g_failures, g_index);
  return g_failures == 0 ? 0 : 1;
}
