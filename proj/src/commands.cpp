#include "trailscan/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <thread>

#include "trailscan/analysis.hpp"
#include "trailscan/config.hpp"
#include "trailscan/detectors.hpp"
#include "trailscan/family.hpp"
#include "trailscan/mc.hpp"
#include "trailscan/report.hpp"
#include "trailscan/rng.hpp"
#include "trailscan/verify.hpp"

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

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

Detector detector_by_name(const std::string& name, const Family& fam,
                          double theta, int m) {
  if (name == "bayes") return make_bayes_detector(fam, theta);
  if (name == "glrt") return make_glrt_detector();
  if (name == "strip") return make_strip_detector(default_strip_width(m));
  if (name == "was") return make_was_detector();
  throw std::invalid_argument("unknown detector: " + name);
}

PathSource path_source(const ExperimentConfig& cfg, const LayeredDag& g,
                       int m) {
  if (!cfg.path.empty()) return PathSource::fixed(config_path(cfg, g));
  return PathSource::from_prior(config_prior(cfg, m));
}

std::vector<double> theta_grid_for(const Family& fam) {
  switch (fam.kind()) {
    case FamilyKind::gaussian:
      return {0.25, 0.5, 0.75, 1.0, 1.25, 1.5};
    case FamilyKind::exponential:
      return {0.05, 0.15, 0.25, 0.35, 0.45};
    case FamilyKind::bernoulli:
      return {0.5, 1.0, 1.5, 2.0};
  }
  return {};
}

}  // namespace

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("TRAILSCAN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

int cmd_theory(const std::string& family, const std::vector<int>& was_ms,
               double alpha, std::ostream& out) {
  Family fam = Family::gaussian();
  try {
    fam = Family::from_name(family);
  } catch (const std::invalid_argument& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }

  out << "family: " << fam.name() << "\n";
  const ThetaStar ts = theta_star(fam);
  if (ts.unbounded) {
    out << "  optimal tilt: unbounded (the rate decreases toward its "
           "infimum as theta grows)\n";
  } else {
    const double shift = fam.mean(ts.value) - fam.mean(0.0);
    out << fmt("  theta_star      %.7f\n", ts.value);
    out << fmt("  f(theta_star)   %.7f\n", ts.f_min);
    out << fmt("  mean shift      %.7f\n", shift);
  }

  out << "  theta     lambda      chi2        alpha\n";
  for (double theta : theta_grid_for(fam)) {
    if (!fam.in_domain(2.0 * theta)) continue;
    out << fmt("  %-8.3f  %-10.5f  %-10.5f  %.5f\n", theta,
               lambda_ratio(fam, theta), chi_square(fam, theta),
               trailscan::alpha(fam, theta));
  }

  out << fmt("\n95%%-power shift table (alpha %.3f):\n", alpha);
  out << "  m         lambda_m    mu95\n";
  for (int m : was_ms) {
    out << fmt("  %-8d  %-10.6f  %.4f\n", m, was_lambda(m),
               was_mu95(m, alpha));
  }

  out << "\ntree max-statistic type-1 bound:\n";
  out << "  m         bound\n";
  for (int m : {16, 64, 256, 1024, 4096})
    out << fmt("  %-8d  %.6f\n", m, tree_glrt_type1_bound(m));
  return 0;
}

int cmd_power(const RunOptions& opt, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = parse_config(opt.config_path);
  if (cfg.grid.empty())
    throw ConfigError(cfg.source_path, 0,
                      "missing required key 'mu_grid' or 'theta_grid'");
  const Family fam = Family::from_name(cfg.family);
  const int threads = resolve_threads(opt.threads);

  std::vector<PowerRow> rows;
  std::vector<std::pair<std::string, std::string>> figures;
  uint64_t stage = 0;
  for (int m : cfg.m_list) {
    const LayeredDag g = LayeredDag::build(cfg.graph, m, cfg.d);
    const PathSource src = path_source(cfg, g, m);
    for (const std::string& det_name : cfg.detectors) {
      const bool theta_dependent = det_name == "bayes";
      Detector det;
      CalibrationResult cal;
      if (!theta_dependent) {
        det = detector_by_name(det_name, fam, 0.0, m);
        cal = calibrate(det, g, fam, cfg.alpha, cfg.trials_calib,
                        seed_derive(opt.seed, stage++), threads);
      }
      std::vector<SvgPoint> pts;
      for (double theta : cfg.grid) {
        if (theta_dependent) {
          det = detector_by_name(det_name, fam, theta, m);
          cal = calibrate(det, g, fam, cfg.alpha, cfg.trials_calib,
                          seed_derive(opt.seed, stage++), threads);
        }
        const PowerEstimate pe =
            estimate_power(det, cal.threshold, g, fam, theta, src,
                           cfg.trials_power, seed_derive(opt.seed, stage++),
                           threads);
        PowerRow row;
        row.detector = det_name;
        row.graph = cfg.graph;
        row.m = m;
        row.mu = fam.mean(theta) - fam.mean(0.0);
        row.theta = theta;
        row.power = pe.power;
        row.se = pe.se;
        row.n_trials = pe.n_trials;
        row.threshold = cal.threshold;
        row.alpha_hat = cal.alpha_hat;
        row.master_seed = opt.seed;
        rows.push_back(row);
        pts.push_back({theta, pe.power});
        out << fmt("%-6s m=%-7d %s=%-8.4g power=%.4f se=%.4f\n",
                   det_name.c_str(), m, cfg.grid_is_mu ? "mu" : "theta", theta,
                   pe.power, pe.se);
      }
      if (opt.svg) {
        const std::string name =
            "power_" + det_name + "_m" + std::to_string(m) + ".svg";
        figures.emplace_back(
            name, svg_power_curve(det_name + " power, m = " + std::to_string(m),
                                  cfg.grid_is_mu ? "mu" : "theta", pts));
      }
    }
  }

  RunManifest manifest;
  manifest.config_echo = config_echo(cfg);
  manifest.master_seed = opt.seed;
  const std::string base = opt.out_dir + "/";
  if (opt.format == "csv" || opt.format == "both") {
    write_text_file(base + "power.csv", power_csv(rows));
    manifest.outputs.push_back(base + "power.csv");
  }
  for (const auto& [name, content] : figures) {
    write_text_file(base + name, content);
    manifest.outputs.push_back(base + name);
  }
  if (opt.format == "json" || opt.format == "both") {
    const std::string path = base + "power.json";
    write_text_file(path, power_json(rows, seconds_since(t0), opt.seed));
    manifest.outputs.push_back(path);
  }
  manifest.outputs.push_back(base + "manifest.json");
  manifest.wall_seconds = seconds_since(t0);
  write_text_file(base + "manifest.json", manifest_json(manifest));
  for (const std::string& path : manifest.outputs)
    out << "wrote " << path << "\n";
  return 0;
}

int cmd_mu95(const RunOptions& opt, std::ostream& out) {
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentConfig cfg = parse_config(opt.config_path);
  const Family fam = Family::from_name(cfg.family);
  const int threads = resolve_threads(opt.threads);

  std::vector<Mu95Row> rows;
  uint64_t stage = 0;
  for (int m : cfg.m_list) {
    const LayeredDag g = LayeredDag::build(cfg.graph, m, cfg.d);
    const PathSource src = path_source(cfg, g, m);
    for (const std::string& det_name : cfg.detectors) {
      const bool recalibrate = det_name == "bayes";
      auto det_for = [&fam, &det_name, m](double theta) {
        return detector_by_name(det_name, fam, theta, m);
      };
      Mu95Row row;
      row.detector = det_name;
      row.graph = cfg.graph;
      row.m = m;
      row.master_seed = opt.seed;
      const uint64_t cell_seed = seed_derive(opt.seed, stage++);
      try {
        const Mu95Result r =
            mu95_search(det_for, recalibrate, g, fam, src, cfg.alpha, 0.95,
                        cfg.trials_calib, cfg.trials_power, 0.05, 1.0, cfg.tol,
                        cell_seed, threads);
        row.ok = true;
        row.mu95 = r.theta;
        row.lo = r.lo;
        row.hi = r.hi;
        row.power_lo = r.power_lo.power;
        row.power_hi = r.power_hi.power;
        row.threshold = r.threshold;
        row.alpha_hat = r.alpha_hat;
        out << fmt("%-6s m=%-7d mu95=%.4f in [%.4f, %.4f]\n", det_name.c_str(),
                   m, r.theta, r.lo, r.hi);
      } catch (const std::exception& e) {
        row.ok = false;
        row.message = e.what();
        out << fmt("%-6s m=%-7d failed: %s\n", det_name.c_str(), m, e.what());
      }
      rows.push_back(row);
    }
  }

  RunManifest manifest;
  manifest.config_echo = config_echo(cfg);
  manifest.master_seed = opt.seed;
  const std::string base = opt.out_dir + "/";
  if (opt.format == "csv" || opt.format == "both") {
    write_text_file(base + "mu95.csv", mu95_csv(rows));
    manifest.outputs.push_back(base + "mu95.csv");
  }
  if (opt.format == "json" || opt.format == "both") {
    write_text_file(base + "mu95.json",
                    mu95_json(rows, seconds_since(t0), opt.seed));
    manifest.outputs.push_back(base + "mu95.json");
  }
  manifest.outputs.push_back(base + "manifest.json");
  manifest.wall_seconds = seconds_since(t0);
  write_text_file(base + "manifest.json", manifest_json(manifest));
  for (const std::string& path : manifest.outputs)
    out << "wrote " << path << "\n";
  return 0;
}

int cmd_verify(const std::string& level, uint64_t seed, int threads,
               std::ostream& out) {
  if (level != "fast" && level != "full") {
    out << "error: verify level must be 'fast' or 'full', got '" << level
        << "'\n";
    return 2;
  }
  const std::vector<CheckResult> checks =
      level == "fast" ? verify_fast(seed, resolve_threads(threads))
                      : verify_full(seed, resolve_threads(threads));
  const int failures = print_check_report(out, checks);
  return failures == 0 ? 0 : 1;
}

}  // namespace trailscan
