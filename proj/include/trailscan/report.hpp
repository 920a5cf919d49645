#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "trailscan/graph.hpp"

namespace trailscan {

inline constexpr const char* kVersion = "trailscan 0.1.0";

struct PowerRow {
  std::string detector;
  GraphKind graph = GraphKind::lattice2d;
  int m = 0;
  double mu = 0.0;  // planted mean shift, mean(theta) - mean(0)
  double theta = 0.0;
  double power = 0.0;
  double se = 0.0;
  int64_t n_trials = 0;
  double threshold = 0.0;
  double alpha_hat = 0.0;
  uint64_t master_seed = 0;
};

struct Mu95Row {
  std::string detector;
  GraphKind graph = GraphKind::lattice2d;
  int m = 0;
  bool ok = false;
  double mu95 = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double power_lo = 0.0;
  double power_hi = 0.0;
  double threshold = 0.0;
  double alpha_hat = 0.0;
  uint64_t master_seed = 0;
  std::string message;  // bracket failure reason when !ok
};

// Locale-independent CSV with the fixed column set
// detector,graph,m,mu,theta,power,se,n_trials,threshold,alpha_hat,master_seed.
std::string power_csv(const std::vector<PowerRow>& rows);

// detector,graph,m,mu95,lo,hi,power_lo,power_hi,threshold,alpha_hat,status,
// master_seed; failed cells carry nan values and status = error.
std::string mu95_csv(const std::vector<Mu95Row>& rows);

// JSON mirrors of the CSVs plus runtime metadata.
std::string power_json(const std::vector<PowerRow>& rows, double wall_seconds,
                       uint64_t master_seed);
std::string mu95_json(const std::vector<Mu95Row>& rows, double wall_seconds,
                      uint64_t master_seed);

struct SvgPoint {
  double x = 0.0;
  double y = 0.0;
};
// Hand-emitted power-curve figure: polyline with point markers, axes with
// tick labels, and a dashed reference line at y = ref.
std::string svg_power_curve(const std::string& title,
                            const std::string& x_label,
                            const std::vector<SvgPoint>& points,
                            double ref = 0.95);

struct RunManifest {
  std::string config_echo;
  std::string version = kVersion;
  uint64_t master_seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
};
std::string manifest_json(const RunManifest& manifest);

// Writes content to path, creating parent directories as needed.
void write_text_file(const std::string& path, const std::string& content);

}  // namespace trailscan
