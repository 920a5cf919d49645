#include "trailscan/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace trailscan {

namespace {

std::string g10(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

std::string g6(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

nlohmann::json row_json(const PowerRow& r) {
  return {{"detector", r.detector},
          {"graph", to_string(r.graph)},
          {"m", r.m},
          {"mu", r.mu},
          {"theta", r.theta},
          {"power", r.power},
          {"se", r.se},
          {"n_trials", r.n_trials},
          {"threshold", r.threshold},
          {"alpha_hat", r.alpha_hat},
          {"master_seed", r.master_seed}};
}

nlohmann::json row_json(const Mu95Row& r) {
  return {{"detector", r.detector},
          {"graph", to_string(r.graph)},
          {"m", r.m},
          {"status", r.ok ? "ok" : "error"},
          {"mu95", r.mu95},
          {"lo", r.lo},
          {"hi", r.hi},
          {"power_lo", r.power_lo},
          {"power_hi", r.power_hi},
          {"threshold", r.threshold},
          {"alpha_hat", r.alpha_hat},
          {"master_seed", r.master_seed},
          {"message", r.message}};
}

}  // namespace

std::string power_csv(const std::vector<PowerRow>& rows) {
  std::string out =
      "detector,graph,m,mu,theta,power,se,n_trials,threshold,alpha_hat,"
      "master_seed\n";
  for (const PowerRow& r : rows) {
    out += r.detector + "," + to_string(r.graph) + "," + std::to_string(r.m) +
           "," + g10(r.mu) + "," + g10(r.theta) + "," + g10(r.power) + "," +
           g10(r.se) + "," + std::to_string(r.n_trials) + "," +
           g10(r.threshold) + "," + g10(r.alpha_hat) + "," +
           std::to_string(r.master_seed) + "\n";
  }
  return out;
}

std::string mu95_csv(const std::vector<Mu95Row>& rows) {
  std::string out =
      "detector,graph,m,mu95,lo,hi,power_lo,power_hi,threshold,alpha_hat,"
      "status,master_seed\n";
  for (const Mu95Row& r : rows) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool ok = r.ok;
    out += r.detector + "," + to_string(r.graph) + "," + std::to_string(r.m) +
           "," + g10(ok ? r.mu95 : nan) + "," + g10(ok ? r.lo : nan) + "," +
           g10(ok ? r.hi : nan) + "," + g10(ok ? r.power_lo : nan) + "," +
           g10(ok ? r.power_hi : nan) + "," + g10(r.threshold) + "," +
           g10(r.alpha_hat) + "," + (ok ? "ok" : "error") + "," +
           std::to_string(r.master_seed) + "\n";
  }
  return out;
}

std::string power_json(const std::vector<PowerRow>& rows, double wall_seconds,
                       uint64_t master_seed) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["master_seed"] = master_seed;
  j["wall_seconds"] = wall_seconds;
  j["rows"] = nlohmann::json::array();
  for (const PowerRow& r : rows) j["rows"].push_back(row_json(r));
  return j.dump(2) + "\n";
}

std::string mu95_json(const std::vector<Mu95Row>& rows, double wall_seconds,
                      uint64_t master_seed) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["master_seed"] = master_seed;
  j["wall_seconds"] = wall_seconds;
  j["rows"] = nlohmann::json::array();
  for (const Mu95Row& r : rows) j["rows"].push_back(row_json(r));
  return j.dump(2) + "\n";
}

std::string svg_power_curve(const std::string& title,
                            const std::string& x_label,
                            const std::vector<SvgPoint>& points, double ref) {
  constexpr double kW = 640.0, kH = 420.0;
  constexpr double kLeft = 70.0, kRight = 620.0, kTop = 30.0, kBottom = 370.0;
  double xmin = points.empty() ? 0.0 : points.front().x;
  double xmax = xmin;
  for (const SvgPoint& p : points) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
  }
  if (!(xmax > xmin)) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  auto px = [&](double x) {
    return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft);
  };
  auto py = [&](double y) { return kBottom - y * (kBottom - kTop); };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
       "height=\"420\" viewBox=\"0 0 640 420\">\n";
  s += "<rect width=\"" + g6(kW) + "\" height=\"" + g6(kH) +
       "\" fill=\"white\"/>\n";
  s += "<text x=\"320\" y=\"18\" text-anchor=\"middle\" "
       "font-family=\"sans-serif\" font-size=\"14\">" +
       xml_escape(title) + "</text>\n";

  // axes
  s += "<line x1=\"" + g6(kLeft) + "\" y1=\"" + g6(kBottom) + "\" x2=\"" +
       g6(kRight) + "\" y2=\"" + g6(kBottom) +
       "\" stroke=\"#333\" stroke-width=\"1\"/>\n";
  s += "<line x1=\"" + g6(kLeft) + "\" y1=\"" + g6(kTop) + "\" x2=\"" +
       g6(kLeft) + "\" y2=\"" + g6(kBottom) +
       "\" stroke=\"#333\" stroke-width=\"1\"/>\n";

  for (int i = 0; i <= 4; ++i) {
    const double y = 0.25 * i;
    s += "<line x1=\"" + g6(kLeft - 4) + "\" y1=\"" + g6(py(y)) + "\" x2=\"" +
         g6(kLeft) + "\" y2=\"" + g6(py(y)) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + g6(kLeft - 8) + "\" y=\"" + g6(py(y) + 4) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" "
         "font-size=\"12\">" +
         g6(y) + "</text>\n";
  }
  std::vector<double> xticks;
  if (points.size() <= 8) {
    for (const SvgPoint& p : points) xticks.push_back(p.x);
  } else {
    for (int i = 0; i <= 4; ++i)
      xticks.push_back(xmin + (xmax - xmin) * i / 4.0);
  }
  if (xticks.empty()) xticks = {xmin, xmax};
  for (double x : xticks) {
    s += "<line x1=\"" + g6(px(x)) + "\" y1=\"" + g6(kBottom) + "\" x2=\"" +
         g6(px(x)) + "\" y2=\"" + g6(kBottom + 4) + "\" stroke=\"#333\"/>\n";
    s += "<text x=\"" + g6(px(x)) + "\" y=\"" + g6(kBottom + 18) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">" +
         g6(x) + "</text>\n";
  }
  s += "<text x=\"" + g6((kLeft + kRight) / 2) + "\" y=\"" + g6(kH - 12) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
       "font-size=\"13\">" +
       xml_escape(x_label) + "</text>\n";
  s += "<text x=\"16\" y=\"" + g6((kTop + kBottom) / 2) +
       "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       "transform=\"rotate(-90 16 " +
       g6((kTop + kBottom) / 2) + ")\">power</text>\n";

  // reference line
  s += "<line x1=\"" + g6(kLeft) + "\" y1=\"" + g6(py(ref)) + "\" x2=\"" +
       g6(kRight) + "\" y2=\"" + g6(py(ref)) +
       "\" stroke=\"#d62728\" stroke-dasharray=\"6,4\"/>\n";
  s += "<text x=\"" + g6(kRight - 4) + "\" y=\"" + g6(py(ref) - 6) +
       "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
       "fill=\"#d62728\">" +
       g6(ref) + "</text>\n";

  if (!points.empty()) {
    std::string poly;
    for (const SvgPoint& p : points) {
      if (!poly.empty()) poly += " ";
      poly += g6(px(p.x)) + "," + g6(py(p.y));
    }
    s += "<polyline points=\"" + poly +
         "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    for (const SvgPoint& p : points) {
      s += "<circle cx=\"" + g6(px(p.x)) + "\" cy=\"" + g6(py(p.y)) +
           "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
  }
  s += "</svg>\n";
  return s;
}

std::string manifest_json(const RunManifest& manifest) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["master_seed"] = manifest.master_seed;
  j["wall_seconds"] = manifest.wall_seconds;
  j["config"] = manifest.config_echo;
  j["outputs"] = manifest.outputs;
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace trailscan
