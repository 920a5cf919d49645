#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "trailscan/commands.hpp"
#include "trailscan/config.hpp"
#include "trailscan/report.hpp"

using namespace trailscan;

namespace {

std::string tmp_path(const std::string& name) {
  return "cli_test_tmp/" + name;
}

std::string write_cfg(const std::string& name, const std::string& text) {
  const std::string path = tmp_path(name);
  write_text_file(path, text);
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// what() of the ConfigError raised by text, or "" when it parses
std::string parse_error(const std::string& name, const std::string& text) {
  const std::string path = write_cfg(name, text);
  try {
    (void)parse_config(path);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("config parses and echoes round-trip") {
  const std::string path = write_cfg("good.txt",
                                     "# experiment\n"
                                     "graph = lattice2d\n"
                                     "m = 9, 17\n"
                                     "family = gaussian\n"
                                     "detector = was, glrt\n"
                                     "prior = uniform\n"
                                     "alpha = 0.05\n"
                                     "mu_grid = 0.5, 1.0\n"
                                     "trials_calib = 200\n"
                                     "trials_power = 300\n"
                                     "tol = 0.05\n");
  const ExperimentConfig cfg = parse_config(path);
  CHECK(cfg.graph == GraphKind::lattice2d);
  CHECK(cfg.m_list == std::vector<int>{9, 17});
  CHECK(cfg.detectors == std::vector<std::string>{"was", "glrt"});
  CHECK(cfg.prior == "uniform");
  CHECK(cfg.grid == std::vector<double>{0.5, 1.0});
  CHECK(cfg.grid_is_mu);
  CHECK(cfg.trials_calib == 200);
  CHECK(cfg.trials_power == 300);
  CHECK(cfg.tol == doctest::Approx(0.05));

  const std::string echo = config_echo(cfg);
  CHECK(contains(echo, "m = 9,17"));
  const std::string path2 = write_cfg("good_echo.txt", echo);
  CHECK(config_echo(parse_config(path2)) == echo);
}

TEST_CASE("config errors carry the offending location") {
  const std::string e = parse_error("e01.txt", "bogus = 1\n");
  CHECK(contains(e, "e01.txt:1: unknown key 'bogus'"));

  CHECK(contains(parse_error("e02.txt", "m = 5\nm = 7\n"),
                 "duplicate key 'm' (first at line 1)"));
  CHECK(contains(parse_error("e03.txt", "m 5\n"), "expected `key = value`"));
  CHECK(contains(parse_error("e04.txt", "m = five\n"), "expected an integer"));
  CHECK(contains(parse_error("e05.txt", "alpha = 0.05x\n"),
                 "trailing characters"));
  CHECK(contains(parse_error("e06.txt", "alpha = 1.5\n"),
                 "alpha must be in (0,1)"));
  CHECK(contains(parse_error("e07.txt", "trials_calib = 50\n"),
                 "trials_calib must be >= 100"));
  CHECK(contains(parse_error("e08.txt", "m = 0\n"), "m out of range"));
  CHECK(contains(parse_error("e09.txt", "m =\n"), "missing value for 'm'"));
  CHECK(contains(parse_error("e10.txt", "graph = mesh\n"),
                 "unknown graph kind"));
  CHECK(contains(parse_error("e11.txt", "m = 5\ndetector = foo\n"),
                 "unknown detector 'foo'"));
  CHECK(contains(parse_error("e12.txt", "m = 5\ndetector = glrt\nprior = flat\n"),
                 "unknown prior 'flat'"));
  CHECK_THROWS_AS((void)parse_config(tmp_path("really_not_there.txt")),
                  ConfigError);
}

TEST_CASE("config invariants are enforced after parsing") {
  CHECK(contains(parse_error("v01.txt", "detector = glrt\n"),
                 "missing required key 'm'"));
  CHECK(contains(parse_error("v02.txt", "m = 5\n"),
                 "missing required key 'detector'"));
  CHECK(contains(parse_error("v03.txt",
                             "m = 5\ndetector = glrt\nmu_grid = 1.0,0.5\n"),
                 "strictly increasing"));
  CHECK(contains(
      parse_error("v04.txt",
                  "m = 5\ndetector = glrt\nfamily = exponential\n"
                  "mu_grid = 0.1\n"),
      "mu_grid requires family = gaussian"));
  CHECK(contains(
      parse_error("v05.txt",
                  "m = 5\ndetector = glrt\nfamily = exponential\n"
                  "theta_grid = 0.5,1.5\n"),
      "outside the exponential domain"));
  CHECK(contains(parse_error("v06.txt",
                             "m = 5\ndetector = glrt\nprior = uniform\n"
                             "path = ++++\n"),
                 "prior and path are mutually exclusive"));
  CHECK(contains(parse_error("v07.txt",
                             "m = 5\ndetector = glrt\nmu_grid = 0.5\n"
                             "theta_grid = 0.7\n"),
                 "mutually exclusive"));
  CHECK(contains(parse_error("v08.txt", "m = 5\ndetector = glrt\nd = 3\n"),
                 "d only applies to graph = lattice_hd"));
  CHECK(contains(parse_error("v09.txt",
                             "graph = tree\nm = 5\ndetector = strip\n"),
                 "2d lattice only"));
  CHECK(contains(parse_error("v10.txt",
                             "graph = tree\nm = 5\ndetector = glrt\n"
                             "prior = hm\n"),
                 "hm prior"));
  CHECK(contains(parse_error("v11.txt",
                             "m = 4\ndetector = glrt\npath = +0+\n"),
                 "path step '0' invalid"));
  CHECK(contains(parse_error("v12.txt",
                             "m = 4\ndetector = glrt\npath = ++\n"),
                 "path has 2 steps but m = 4 needs 3"));
  CHECK(contains(parse_error("v13.txt",
                             "m = 5\ndetector = glrt\nfamily = cauchy\n"),
                 "unknown family: cauchy"));
}

TEST_CASE("prior and path dispatch from a config") {
  ExperimentConfig cfg;
  cfg.m_list = {9};
  cfg.detectors = {"was"};
  CHECK(config_prior(cfg, 9).kind == PriorKind::uniform);

  cfg.prior = "hm";
  const PriorSpec hm = config_prior(cfg, 4096);
  CHECK(hm.kind == PriorKind::hm);
  CHECK(hm.a_seq.size() == 13);

  cfg.prior = "independent_uniform";
  CHECK(config_prior(cfg, 9).kind == PriorKind::independent_uniform);
  CHECK_THROWS_AS((void)config_path(cfg, LayeredDag::build(GraphKind::lattice2d, 9)),
                  std::logic_error);

  cfg.prior.clear();
  cfg.path = "increasing";
  const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, 9);
  CHECK(config_path(cfg, g).steps == increasing_path(g).steps);
  CHECK_THROWS_AS((void)config_prior(cfg, 9), std::logic_error);

  cfg.path = "+-+";
  const LayeredDag g4 = LayeredDag::build(GraphKind::lattice2d, 4);
  CHECK(config_path(cfg, g4).steps == std::vector<int8_t>{1, -1, 1});

  cfg.path = "011";
  const LayeredDag t4 = LayeredDag::build(GraphKind::tree, 4);
  CHECK(config_path(cfg, t4).steps == std::vector<int8_t>{0, 1, 1});
}

TEST_CASE("report formats") {
  PowerRow row;
  row.detector = "was";
  row.m = 65;
  row.mu = 1.2;
  row.theta = 1.2;
  row.power = 0.5;
  row.se = 0.01118;
  row.n_trials = 2000;
  row.threshold = 0.754;
  row.alpha_hat = 0.0495;
  row.master_seed = 42;
  const std::string csv = power_csv({row});
  CHECK(csv ==
        "detector,graph,m,mu,theta,power,se,n_trials,threshold,alpha_hat,"
        "master_seed\n"
        "was,lattice2d,65,1.2,1.2,0.5,0.01118,2000,0.754,0.0495,42\n");

  Mu95Row bad;
  bad.detector = "glrt";
  bad.m = 9;
  bad.ok = false;
  bad.message = "no bracket";
  const std::string mcsv = mu95_csv({bad});
  CHECK(contains(mcsv,
                 "detector,graph,m,mu95,lo,hi,power_lo,power_hi,threshold,"
                 "alpha_hat,status,master_seed\n"));
  CHECK(contains(mcsv, "nan"));
  CHECK(contains(mcsv, ",error,"));

  const nlohmann::json pj = nlohmann::json::parse(power_json({row}, 1.5, 42));
  CHECK(pj["version"] == kVersion);
  CHECK(pj["master_seed"] == 42);
  CHECK(pj["rows"][0]["detector"] == "was");
  CHECK(pj["rows"][0]["power"] == doctest::Approx(0.5));

  const std::string svg = svg_power_curve("a<b&c", "mu", {{0.5, 0.2}, {1.0, 0.9}});
  CHECK(contains(svg, "<svg xmlns"));
  CHECK(contains(svg, "polyline"));
  CHECK(contains(svg, "0.95"));
  CHECK(contains(svg, "a&lt;b&amp;c"));

  RunManifest man;
  man.config_echo = "m = 9\n";
  man.master_seed = 7;
  man.outputs = {"out/power.csv"};
  const nlohmann::json mj = nlohmann::json::parse(manifest_json(man));
  CHECK(mj["config"] == "m = 9\n");
  CHECK(mj["outputs"][0] == "out/power.csv");
}

TEST_CASE("text files land in fresh directories") {
  const std::string path = tmp_path("deep/nested/file.txt");
  write_text_file(path, "hello\n");
  CHECK(read_file(path) == "hello\n");
  CHECK_THROWS_AS(write_text_file(tmp_path("deep/nested"), "x"),
                  std::runtime_error);
}

TEST_CASE("closed-form report command") {
  std::ostringstream os;
  CHECK(cmd_theory("gaussian", {65, 1025}, 0.05, os) == 0);
  CHECK(contains(os.str(), "1.1774100"));  // sqrt(2 log 2)
  CHECK(contains(os.str(), "1.5079"));     // m = 65 shift
  CHECK(contains(os.str(), "1.2004"));     // m = 1025 shift
  CHECK(contains(os.str(), "tree max-statistic"));

  std::ostringstream bad;
  CHECK(cmd_theory("cauchy", {}, 0.05, bad) == 2);
  CHECK(contains(bad.str(), "error"));

  std::ostringstream expo;
  CHECK(cmd_theory("exponential", {65}, 0.05, expo) == 0);
  CHECK(contains(expo.str(), "0.6266354"));
}

TEST_CASE("verify command levels") {
  std::ostringstream bad;
  CHECK(cmd_verify("bogus", 1, 1, bad) == 2);
  CHECK(contains(bad.str(), "fast"));

  std::ostringstream os;
  CHECK(cmd_verify("fast", 1, 1, os) == 0);
  CHECK(contains(os.str(), "checks passed"));
}

TEST_CASE("power command writes the full artifact set") {
  const std::string cfg = write_cfg("power_run.txt",
                                    "graph = lattice2d\n"
                                    "m = 9\n"
                                    "family = gaussian\n"
                                    "detector = was\n"
                                    "prior = uniform\n"
                                    "alpha = 0.05\n"
                                    "mu_grid = 0.6, 2.2\n"
                                    "trials_calib = 200\n"
                                    "trials_power = 200\n");
  RunOptions opt;
  opt.config_path = cfg;
  opt.out_dir = tmp_path("out1");
  opt.seed = 3;
  opt.threads = 1;
  opt.svg = true;

  std::ostringstream os;
  CHECK(cmd_power(opt, os) == 0);
  CHECK(contains(os.str(), "wrote " + tmp_path("out1") + "/power.csv"));

  const std::string csv = read_file(tmp_path("out1/power.csv"));
  CHECK(csv.rfind("detector,graph,m,mu,theta,power,se,n_trials,threshold,"
                  "alpha_hat,master_seed\n",
                  0) == 0);
  CHECK(contains(csv, "was,lattice2d,9,0.6,0.6,"));
  CHECK(contains(csv, "was,lattice2d,9,2.2,2.2,"));
  CHECK(std::filesystem::exists(tmp_path("out1/power.json")));
  CHECK(std::filesystem::exists(tmp_path("out1/power_was_m9.svg")));
  const nlohmann::json man =
      nlohmann::json::parse(read_file(tmp_path("out1/manifest.json")));
  CHECK(man["outputs"].size() == 4);

  // same seed, fresh directory: byte-identical tables
  RunOptions again = opt;
  again.out_dir = tmp_path("out2");
  std::ostringstream os2;
  CHECK(cmd_power(again, os2) == 0);
  CHECK(read_file(tmp_path("out2/power.csv")) == csv);

  RunOptions csv_only = opt;
  csv_only.out_dir = tmp_path("out3");
  csv_only.svg = false;
  csv_only.format = "csv";
  std::ostringstream os3;
  CHECK(cmd_power(csv_only, os3) == 0);
  CHECK(std::filesystem::exists(tmp_path("out3/power.csv")));
  CHECK(!std::filesystem::exists(tmp_path("out3/power.json")));

  const std::string no_grid = write_cfg("power_nogrid.txt",
                                        "m = 9\n"
                                        "detector = was\n");
  RunOptions bad = opt;
  bad.config_path = no_grid;
  bad.out_dir = tmp_path("out4");
  std::ostringstream os4;
  CHECK_THROWS_AS((void)cmd_power(bad, os4), ConfigError);
}

TEST_CASE("shift-search command writes a table") {
  const std::string cfg = write_cfg("mu95_run.txt",
                                    "graph = lattice2d\n"
                                    "m = 9\n"
                                    "family = gaussian\n"
                                    "detector = was\n"
                                    "prior = uniform\n"
                                    "alpha = 0.05\n"
                                    "trials_calib = 400\n"
                                    "trials_power = 400\n"
                                    "tol = 0.2\n");
  RunOptions opt;
  opt.config_path = cfg;
  opt.out_dir = tmp_path("out_mu");
  opt.seed = 7;
  opt.threads = 1;
  opt.format = "csv";

  std::ostringstream os;
  CHECK(cmd_mu95(opt, os) == 0);
  const std::string csv = read_file(tmp_path("out_mu/mu95.csv"));
  CHECK(contains(csv, ",ok,"));

  // second line: was,lattice2d,9,<mu95>,...
  const size_t nl = csv.find('\n');
  std::stringstream row(csv.substr(nl + 1));
  std::string field;
  for (int i = 0; i < 4; ++i) std::getline(row, field, ',');
  const double mu95 = std::stod(field);
  CHECK(mu95 > 1.0);   // analytic value near 1.96
  CHECK(mu95 < 3.0);
}

TEST_CASE("thread-count resolution order") {
  CHECK(resolve_threads(4) == 4);
  setenv("TRAILSCAN_THREADS", "3", 1);
  CHECK(resolve_threads(0) == 3);
  CHECK(resolve_threads(2) == 2);  // explicit flag wins
  setenv("TRAILSCAN_THREADS", "0", 1);
  CHECK(resolve_threads(0) >= 1);
  setenv("TRAILSCAN_THREADS", "2x", 1);
  CHECK(resolve_threads(0) >= 1);
  unsetenv("TRAILSCAN_THREADS");
  CHECK(resolve_threads(0) >= 1);
}
