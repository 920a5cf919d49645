#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "trailscan/graph.hpp"
#include "trailscan/prior.hpp"

namespace trailscan {

// Parse or validation failure; what() is "file:line: message" (line 0 omits
// the line part) so shells and editors can jump to the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& file, int line, const std::string& message);
};

struct ExperimentConfig {
  GraphKind graph = GraphKind::lattice2d;
  std::vector<int> m_list;
  int d = 2;  // lattice_hd only
  std::string family = "gaussian";
  std::vector<std::string> detectors;
  std::string prior;  // uniform | hm | independent_uniform; empty = unset
  std::string path;   // "increasing" or a step string; empty = unset
  double alpha = 0.05;
  std::vector<double> grid;  // planted theta values (mean shifts for gaussian)
  bool grid_is_mu = false;
  int64_t trials_calib = 2000;
  int64_t trials_power = 2000;
  double tol = 0.02;
  std::string source_path;
};

// Reads `key = value` lines ('#' starts a comment, blank lines skipped).
// Keys: graph, m, d, family, detector, prior, path, alpha, mu_grid,
// theta_grid, trials_calib, trials_power, tol. Lists are comma-separated.
// Unknown or duplicate keys, malformed values, and invariant violations
// (alpha outside (0,1), trials < 100, non-increasing grid, mu_grid with a
// non-gaussian family, both prior and path set) all throw ConfigError.
ExperimentConfig parse_config(const std::string& file_path);

// Prior implied by the config for a given problem size; defaults to the
// uniform prior when neither `prior` nor `path` is set.
PriorSpec config_prior(const ExperimentConfig& cfg, int m);

// Fixed path implied by `path` ("increasing", or per-step characters:
// +/- on the lattice, 0/1 on the tree).
PathSteps config_path(const ExperimentConfig& cfg, const LayeredDag& g);

// Serialized round-trippable echo of the config (one key = value per line).
std::string config_echo(const ExperimentConfig& cfg);

}  // namespace trailscan
