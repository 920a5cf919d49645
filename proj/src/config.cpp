#include "trailscan/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "trailscan/family.hpp"

namespace trailscan {

namespace {

std::string where(const std::string& file, int line) {
  if (line <= 0) return file;
  return file + ":" + std::to_string(line);
}

std::string trim(const std::string& s) {
  size_t b = 0;
  size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& file, int line,
                                    const std::string& value) {
  std::vector<std::string> items;
  std::string cur;
  std::stringstream ss(value);
  while (std::getline(ss, cur, ',')) {
    cur = trim(cur);
    if (cur.empty()) throw ConfigError(file, line, "empty list item");
    items.push_back(cur);
  }
  if (items.empty()) throw ConfigError(file, line, "empty list");
  return items;
}

int64_t parse_i64(const std::string& file, int line, const std::string& s) {
  size_t pos = 0;
  int64_t v = 0;
  try {
    v = std::stoll(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(file, line, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size())
    throw ConfigError(file, line, "trailing characters in integer '" + s + "'");
  return v;
}

double parse_f64(const std::string& file, int line, const std::string& s) {
  size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError(file, line, "expected a number, got '" + s + "'");
  }
  if (pos != s.size())
    throw ConfigError(file, line, "trailing characters in number '" + s + "'");
  return v;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.15g", v);
  if (std::stod(buf) != v) std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ConfigError::ConfigError(const std::string& file, int line,
                         const std::string& message)
    : std::runtime_error(where(file, line) + ": " + message) {}

ExperimentConfig parse_config(const std::string& file_path) {
  std::ifstream in(file_path);
  if (!in) throw ConfigError(file_path, 0, "cannot open config file");

  ExperimentConfig cfg;
  cfg.source_path = file_path;
  std::map<std::string, int> seen;  // key -> line where it appeared
  bool saw_mu_grid = false;
  bool saw_theta_grid = false;

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(file_path, line_no, "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(file_path, line_no, "missing key");
    if (value.empty())
      throw ConfigError(file_path, line_no, "missing value for '" + key + "'");
    if (!seen.emplace(key, line_no).second)
      throw ConfigError(file_path, line_no,
                        "duplicate key '" + key + "' (first at line " +
                            std::to_string(seen[key]) + ")");

    if (key == "graph") {
      try {
        cfg.graph = graph_kind_from_name(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(file_path, line_no, e.what());
      }
    } else if (key == "m") {
      for (const std::string& item : split_list(file_path, line_no, value)) {
        const int64_t m = parse_i64(file_path, line_no, item);
        if (m < 1 || m > (int64_t{1} << 31))
          throw ConfigError(file_path, line_no, "m out of range: " + item);
        cfg.m_list.push_back(static_cast<int>(m));
      }
    } else if (key == "d") {
      const int64_t d = parse_i64(file_path, line_no, value);
      if (d < 1 || d > 30)
        throw ConfigError(file_path, line_no, "d out of range: " + value);
      cfg.d = static_cast<int>(d);
    } else if (key == "family") {
      cfg.family = value;
    } else if (key == "detector") {
      cfg.detectors = split_list(file_path, line_no, value);
      for (const std::string& name : cfg.detectors) {
        if (name != "bayes" && name != "glrt" && name != "strip" &&
            name != "was")
          throw ConfigError(file_path, line_no, "unknown detector '" + name +
                                                    "' (want bayes, glrt, "
                                                    "strip, or was)");
      }
    } else if (key == "prior") {
      if (value != "uniform" && value != "hm" && value != "independent_uniform")
        throw ConfigError(file_path, line_no,
                          "unknown prior '" + value +
                              "' (want uniform, hm, or independent_uniform)");
      cfg.prior = value;
    } else if (key == "path") {
      cfg.path = value;
    } else if (key == "alpha") {
      cfg.alpha = parse_f64(file_path, line_no, value);
      if (!(cfg.alpha > 0.0 && cfg.alpha < 1.0))
        throw ConfigError(file_path, line_no, "alpha must be in (0,1)");
    } else if (key == "mu_grid" || key == "theta_grid") {
      for (const std::string& item : split_list(file_path, line_no, value))
        cfg.grid.push_back(parse_f64(file_path, line_no, item));
      (key == "mu_grid" ? saw_mu_grid : saw_theta_grid) = true;
      cfg.grid_is_mu = (key == "mu_grid");
    } else if (key == "trials_calib" || key == "trials_power") {
      const int64_t t = parse_i64(file_path, line_no, value);
      if (t < 100)
        throw ConfigError(file_path, line_no, key + " must be >= 100");
      (key == "trials_calib" ? cfg.trials_calib : cfg.trials_power) = t;
    } else if (key == "tol") {
      cfg.tol = parse_f64(file_path, line_no, value);
      if (!(cfg.tol > 0.0))
        throw ConfigError(file_path, line_no, "tol must be positive");
    } else {
      throw ConfigError(file_path, line_no, "unknown key '" + key + "'");
    }
  }

  auto line_of = [&](const std::string& key) {
    auto it = seen.find(key);
    return it == seen.end() ? 0 : it->second;
  };

  if (cfg.m_list.empty())
    throw ConfigError(file_path, 0, "missing required key 'm'");
  if (cfg.detectors.empty())
    throw ConfigError(file_path, 0, "missing required key 'detector'");
  if (saw_mu_grid && saw_theta_grid)
    throw ConfigError(file_path, std::max(line_of("mu_grid"), line_of("theta_grid")),
                      "mu_grid and theta_grid are mutually exclusive");
  if (seen.count("d") && cfg.graph != GraphKind::lattice_hd)
    throw ConfigError(file_path, line_of("d"),
                      "d only applies to graph = lattice_hd");
  if (!cfg.prior.empty() && !cfg.path.empty())
    throw ConfigError(file_path, std::max(line_of("prior"), line_of("path")),
                      "prior and path are mutually exclusive");
  if (cfg.prior == "hm" && cfg.graph != GraphKind::lattice2d)
    throw ConfigError(file_path, line_of("prior"),
                      "the hm prior is defined on the 2d lattice only");
  if (cfg.graph != GraphKind::lattice2d) {
    for (const std::string& name : cfg.detectors) {
      if (name == "strip" || name == "was")
        throw ConfigError(file_path, line_of("detector"),
                          "detector '" + name +
                              "' is defined on the 2d lattice only");
    }
  }

  Family fam = Family::gaussian();
  try {
    fam = Family::from_name(cfg.family);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(file_path, line_of("family"), e.what());
  }
  if (saw_mu_grid && fam.kind() != FamilyKind::gaussian)
    throw ConfigError(file_path, line_of("mu_grid"),
                      "mu_grid requires family = gaussian; use theta_grid");
  if (!cfg.grid.empty()) {
    const int gl = saw_mu_grid ? line_of("mu_grid") : line_of("theta_grid");
    for (size_t i = 0; i < cfg.grid.size(); ++i) {
      if (!fam.in_domain(cfg.grid[i]))
        throw ConfigError(file_path, gl,
                          "grid value " + fmt_double(cfg.grid[i]) +
                              " outside the " + cfg.family + " domain");
      if (i > 0 && !(cfg.grid[i] > cfg.grid[i - 1]))
        throw ConfigError(file_path, gl, "grid must be strictly increasing");
    }
  }
  if (!cfg.path.empty() && cfg.path != "increasing") {
    const int pl = line_of("path");
    if (cfg.graph == GraphKind::lattice_hd)
      throw ConfigError(file_path, pl,
                        "explicit step strings are not supported on "
                        "lattice_hd; use path = increasing");
    const std::string charset =
        cfg.graph == GraphKind::lattice2d ? "+-" : "01";
    for (char c : cfg.path) {
      if (charset.find(c) == std::string::npos)
        throw ConfigError(file_path, pl,
                          std::string("path step '") + c + "' invalid (want " +
                              charset + " or \"increasing\")");
    }
    for (int m : cfg.m_list) {
      if (static_cast<int>(cfg.path.size()) != m - 1)
        throw ConfigError(file_path, pl,
                          "path has " + std::to_string(cfg.path.size()) +
                              " steps but m = " + std::to_string(m) +
                              " needs " + std::to_string(m - 1));
    }
  }
  return cfg;
}

PriorSpec config_prior(const ExperimentConfig& cfg, int m) {
  if (!cfg.path.empty())
    throw std::logic_error("config_prior: config uses a fixed path");
  if (cfg.prior.empty() || cfg.prior == "uniform") return PriorSpec::uniform();
  if (cfg.prior == "independent_uniform")
    return PriorSpec::independent_uniform();
  return PriorSpec::hm(hm_sequence(m));
}

PathSteps config_path(const ExperimentConfig& cfg, const LayeredDag& g) {
  if (cfg.path.empty())
    throw std::logic_error("config_path: config uses a prior");
  if (cfg.path == "increasing") return increasing_path(g);
  PathSteps steps;
  steps.kind = g.kind();
  steps.depth = g.depth();
  steps.dim = g.dim();
  steps.steps.reserve(cfg.path.size());
  for (char c : cfg.path) {
    if (g.kind() == GraphKind::lattice2d)
      steps.steps.push_back(c == '+' ? int8_t{1} : int8_t{-1});
    else
      steps.steps.push_back(c == '1' ? int8_t{1} : int8_t{0});
  }
  return steps;
}

std::string config_echo(const ExperimentConfig& cfg) {
  std::string out;
  auto join = [](const std::vector<std::string>& items) {
    std::string s;
    for (size_t i = 0; i < items.size(); ++i) {
      if (i > 0) s += ",";
      s += items[i];
    }
    return s;
  };
  out += std::string("graph = ") + to_string(cfg.graph) + "\n";
  {
    std::vector<std::string> ms;
    for (int m : cfg.m_list) ms.push_back(std::to_string(m));
    out += "m = " + join(ms) + "\n";
  }
  if (cfg.graph == GraphKind::lattice_hd)
    out += "d = " + std::to_string(cfg.d) + "\n";
  out += "family = " + cfg.family + "\n";
  out += "detector = " + join(cfg.detectors) + "\n";
  if (!cfg.path.empty())
    out += "path = " + cfg.path + "\n";
  else if (!cfg.prior.empty())
    out += "prior = " + cfg.prior + "\n";
  out += "alpha = " + fmt_double(cfg.alpha) + "\n";
  if (!cfg.grid.empty()) {
    std::vector<std::string> gs;
    for (double v : cfg.grid) gs.push_back(fmt_double(v));
    out += std::string(cfg.grid_is_mu ? "mu_grid" : "theta_grid") + " = " +
           join(gs) + "\n";
  }
  out += "trials_calib = " + std::to_string(cfg.trials_calib) + "\n";
  out += "trials_power = " + std::to_string(cfg.trials_power) + "\n";
  out += "tol = " + fmt_double(cfg.tol) + "\n";
  return out;
}

}  // namespace trailscan
