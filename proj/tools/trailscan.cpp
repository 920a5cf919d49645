#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "trailscan/commands.hpp"
#include "trailscan/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"planted-path detection: theory tables, power curves, "
               "95%-power shifts, and invariant checks"};
  app.require_subcommand(1);

  std::string family = "gaussian";
  std::vector<int> was_ms = {1025, 2049, 4097, 8193, 16385, 32769};
  double alpha = 0.05;
  CLI::App* theory = app.add_subcommand("theory", "closed-form reference values");
  theory->add_option("--family", family, "gaussian | exponential | bernoulli");
  theory->add_option("--was-mu95", was_ms, "m values for the 95%-power shift table")
      ->delimiter(',');
  theory->add_option("--alpha", alpha, "type-1 error level");

  trailscan::RunOptions opt;
  auto add_run_flags = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "experiment config file")
        ->required();
    sub->add_option("--out", opt.out_dir, "output directory (default: out)");
    sub->add_option("--seed", opt.seed, "master seed (default: 1)");
    sub->add_option("--threads", opt.threads,
                    "worker threads (default: TRAILSCAN_THREADS, then hardware)");
    sub->add_flag("--svg", opt.svg, "also write SVG power-curve figures");
    sub->add_option("--format", opt.format, "csv | json | both (default: both)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
  };
  CLI::App* power =
      app.add_subcommand("power", "calibrate and estimate power over a grid");
  add_run_flags(power);
  CLI::App* mu95 =
      app.add_subcommand("mu95", "bisect for the 95%-power parameter");
  add_run_flags(mu95);

  std::string level = "fast";
  uint64_t verify_seed = 1;
  int verify_threads = 0;
  CLI::App* verify = app.add_subcommand("verify", "run the invariant suite");
  verify->add_option("level", level, "fast | full (default: fast)")
      ->check(CLI::IsMember({"fast", "full"}));
  verify->add_option("--seed", verify_seed, "master seed (default: 1)");
  verify->add_option("--threads", verify_threads,
                     "worker threads (default: TRAILSCAN_THREADS, then hardware)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (theory->parsed())
      return trailscan::cmd_theory(family, was_ms, alpha, std::cout);
    if (power->parsed()) return trailscan::cmd_power(opt, std::cout);
    if (mu95->parsed()) return trailscan::cmd_mu95(opt, std::cout);
    if (verify->parsed())
      return trailscan::cmd_verify(level, verify_seed, verify_threads,
                                   std::cout);
  } catch (const trailscan::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
