#include "trailscan/detectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "trailscan/stats.hpp"

namespace trailscan {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

[[noreturn]] void bad_layer(const char* what, int layer) {
  throw std::runtime_error(std::string(what) + ": non-finite value at layer " +
                           std::to_string(layer));
}

inline double lse2(double a, double b) {
  double mx = a > b ? a : b;
  double mn = a > b ? b : a;
  return mx + std::log1p(std::exp(mn - mx));
}

}  // namespace

double bayes_lr_dp(const NodeField& field, const BayesParams& params) {
  const LayeredDag& g = field.graph;
  const double theta = params.theta;
  const double psi = params.family.psi(theta);
  const double log2 = std::log(2.0);
  const double* vals = field.values.data();
  const int m = g.depth();

  std::vector<double> prev(static_cast<size_t>(g.layer_size(m - 1)));
  std::vector<double> cur(prev.size());
  prev[0] = theta * vals[0] - psi;
  if (!std::isfinite(prev[0])) bad_layer("bayes_lr_dp", 0);

  switch (g.kind()) {
    case GraphKind::lattice2d: {
      for (int i = 1; i < m; ++i) {
        const double* x = vals + g.layer_start(i);
        cur[0] = theta * x[0] - psi + prev[0] - log2;
        for (int o = 1; o < i; ++o) {
          cur[o] = theta * x[o] - psi + lse2(prev[o - 1], prev[o]) - log2;
        }
        cur[i] = theta * x[i] - psi + prev[i - 1] - log2;
        for (int o = 0; o <= i; ++o) {
          if (!std::isfinite(cur[o])) bad_layer("bayes_lr_dp", i);
        }
        std::swap(prev, cur);
      }
      return logsumexp(std::span<const double>(prev.data(),
                                               static_cast<size_t>(m)));
    }
    case GraphKind::tree: {
      for (int i = 1; i < m; ++i) {
        const double* x = vals + g.layer_start(i);
        const int64_t width = g.layer_size(i);
        for (int64_t o = 0; o < width; ++o) {
          cur[o] = theta * x[o] - psi + prev[o >> 1] - log2;
          if (!std::isfinite(cur[o])) bad_layer("bayes_lr_dp", i);
        }
        std::swap(prev, cur);
      }
      return logsumexp(std::span<const double>(
          prev.data(), static_cast<size_t>(g.layer_size(m - 1))));
    }
    case GraphKind::lattice_hd: {
      const int d = g.dim();
      const double dlog2 = d * log2;
      std::vector<int64_t> c(d);
      for (int i = 1; i < m; ++i) {
        const double* x = vals + g.layer_start(i);
        const int64_t width = g.layer_size(i);
        const int64_t rp = i;  // radix of the previous layer's pack
        std::fill(c.begin(), c.end(), 0);
        for (int64_t o = 0; o < width; ++o) {
          double acc = kNegInf;
          for (int64_t mask = 0; mask < (int64_t{1} << d); ++mask) {
            int64_t po = 0;
            bool ok = true;
            for (int a = d - 1; a >= 0; --a) {
              int64_t pc = c[a] - ((mask >> a) & 1);
              if (pc < 0 || pc >= rp) {
                ok = false;
                break;
              }
              po = po * rp + pc;
            }
            if (ok) acc = lse2(acc, prev[po]);
          }
          cur[o] = theta * x[o] - psi + acc - dlog2;
          if (!std::isfinite(cur[o])) bad_layer("bayes_lr_dp", i);
          for (int a = 0; a < d; ++a) {  // odometer over per-axis coords
            if (++c[a] <= i) break;
            c[a] = 0;
          }
        }
        std::swap(prev, cur);
      }
      return logsumexp(std::span<const double>(
          prev.data(), static_cast<size_t>(g.layer_size(m - 1))));
    }
  }
  return 0.0;
}

namespace {

template <class Fn>
void for_each_path_sum(const NodeField& field, Fn&& fn) {
  const LayeredDag& g = field.graph;
  const double* vals = field.values.data();
  const int m = g.depth();
  const int bits_per_step = (g.kind() == GraphKind::lattice_hd) ? g.dim() : 1;
  const int total_bits = (m - 1) * bits_per_step;
  if (total_bits > 20) {
    throw std::length_error("bruteforce: more than 2^20 paths");
  }
  const uint64_t total = uint64_t{1} << total_bits;
  std::vector<int64_t> c(bits_per_step);
  for (uint64_t code = 0; code < total; ++code) {
    double s = vals[0];
    switch (g.kind()) {
      case GraphKind::lattice2d: {
        int64_t o = 0;
        for (int i = 1; i < m; ++i) {
          o += (code >> (i - 1)) & 1;
          s += vals[g.layer_start(i) + o];
        }
        break;
      }
      case GraphKind::tree: {
        int64_t o = 0;
        for (int i = 1; i < m; ++i) {
          o = 2 * o + ((code >> (i - 1)) & 1);
          s += vals[g.layer_start(i) + o];
        }
        break;
      }
      case GraphKind::lattice_hd: {
        const int d = g.dim();
        std::fill(c.begin(), c.end(), 0);
        for (int i = 1; i < m; ++i) {
          int64_t o = 0;
          for (int a = 0; a < d; ++a) c[a] += (code >> ((i - 1) * d + a)) & 1;
          for (int a = d - 1; a >= 0; --a) o = o * (i + 1) + c[a];
          s += vals[g.layer_start(i) + o];
        }
        break;
      }
    }
    fn(s);
  }
}

}  // namespace

double bayes_lr_bruteforce(const NodeField& field, const BayesParams& params) {
  const LayeredDag& g = field.graph;
  const double theta = params.theta;
  const double psi = params.family.psi(theta);
  const int m = g.depth();
  const int bits_per_step = (g.kind() == GraphKind::lattice_hd) ? g.dim() : 1;
  // streaming log-sum-exp over path log-weights
  double mx = kNegInf, acc = 0.0;
  for_each_path_sum(field, [&](double s) {
    double lw = theta * s - m * psi;
    if (lw > mx) {
      acc = acc * std::exp(mx - lw) + 1.0;
      mx = lw;
    } else {
      acc += std::exp(lw - mx);
    }
  });
  double log_paths = (m - 1) * bits_per_step * std::log(2.0);
  return mx + std::log(acc) - log_paths;
}

double glrt_max_dp(const NodeField& field) {
  const LayeredDag& g = field.graph;
  const double* vals = field.values.data();
  const int m = g.depth();
  std::vector<double> prev(static_cast<size_t>(g.layer_size(m - 1)));
  std::vector<double> cur(prev.size());
  prev[0] = vals[0];
  switch (g.kind()) {
    case GraphKind::lattice2d: {
      for (int i = 1; i < m; ++i) {
        const double* x = vals + g.layer_start(i);
        cur[0] = x[0] + prev[0];
        for (int o = 1; o < i; ++o) {
          cur[o] = x[o] + std::max(prev[o - 1], prev[o]);
        }
        cur[i] = x[i] + prev[i - 1];
        std::swap(prev, cur);
      }
      return *std::max_element(prev.begin(), prev.begin() + m);
    }
    case GraphKind::tree: {
      for (int i = 1; i < m; ++i) {
        const double* x = vals + g.layer_start(i);
        const int64_t width = g.layer_size(i);
        for (int64_t o = 0; o < width; ++o) cur[o] = x[o] + prev[o >> 1];
        std::swap(prev, cur);
      }
      return *std::max_element(prev.begin(),
                               prev.begin() + g.layer_size(m - 1));
    }
    case GraphKind::lattice_hd: {
      const int d = g.dim();
      std::vector<int64_t> c(d);
      for (int i = 1; i < m; ++i) {
        const double* x = vals + g.layer_start(i);
        const int64_t width = g.layer_size(i);
        const int64_t rp = i;
        std::fill(c.begin(), c.end(), 0);
        for (int64_t o = 0; o < width; ++o) {
          double best = kNegInf;
          for (int64_t mask = 0; mask < (int64_t{1} << d); ++mask) {
            int64_t po = 0;
            bool ok = true;
            for (int a = d - 1; a >= 0; --a) {
              int64_t pc = c[a] - ((mask >> a) & 1);
              if (pc < 0 || pc >= rp) {
                ok = false;
                break;
              }
              po = po * rp + pc;
            }
            if (ok) best = std::max(best, prev[po]);
          }
          cur[o] = x[o] + best;
          for (int a = 0; a < d; ++a) {
            if (++c[a] <= i) break;
            c[a] = 0;
          }
        }
        std::swap(prev, cur);
      }
      return *std::max_element(prev.begin(),
                               prev.begin() + g.layer_size(m - 1));
    }
  }
  return 0.0;
}

double glrt_max_bruteforce(const NodeField& field) {
  double best = kNegInf;
  for_each_path_sum(field, [&](double s) { best = std::max(best, s); });
  return best;
}

namespace {

void require_lattice2d(const LayeredDag& g, const char* what) {
  if (g.kind() != GraphKind::lattice2d) {
    throw std::invalid_argument(std::string(what) + ": lattice2d only");
  }
}

// widest in-band |j| with the parity of layer i, or -1 when the band misses
// the layer entirely
inline int band_halfwidth(int i, int strip_width) {
  int jm = std::min(i, strip_width);
  if ((jm ^ i) & 1) --jm;
  return jm;
}

}  // namespace

StripValue strip_statistic(const NodeField& field, int strip_width) {
  require_lattice2d(field.graph, "strip_statistic");
  if (strip_width < 0) {
    throw std::invalid_argument("strip_statistic: width must be >= 0");
  }
  const LayeredDag& g = field.graph;
  const double* vals = field.values.data();
  StripValue out;
  for (int i = 0; i < g.depth(); ++i) {
    int jm = band_halfwidth(i, strip_width);
    if (jm < 0) continue;
    int64_t olo = (i - jm) / 2, ohi = (i + jm) / 2;
    const double* x = vals + g.layer_start(i);
    double s = 0.0;
    for (int64_t o = olo; o <= ohi; ++o) s += x[o];
    out.value += s;
    out.n_strip += ohi - olo + 1;
  }
  return out;
}

int64_t strip_node_count(int m, int strip_width) {
  if (m < 1) throw std::invalid_argument("strip_node_count: m must be >= 1");
  if (strip_width < 0) {
    throw std::invalid_argument("strip_node_count: width must be >= 0");
  }
  int64_t n = 0;
  for (int i = 0; i < m; ++i) {
    int jm = band_halfwidth(i, strip_width);
    if (jm >= 0) n += jm + 1;
  }
  return n;
}

int strip_visit_count(const PathSteps& p, int strip_width) {
  if (p.kind != GraphKind::lattice2d) {
    throw std::invalid_argument("strip_visit_count: lattice2d only");
  }
  if (strip_width < 0) {
    throw std::invalid_argument("strip_visit_count: width must be >= 0");
  }
  int64_t j = 0;
  int count = 1;  // origin always inside
  for (int i = 1; i < p.depth; ++i) {
    j += (p.steps[i - 1] > 0) ? 1 : -1;
    if (std::abs(j) <= std::min<int64_t>(i, strip_width)) ++count;
  }
  return count;
}

int default_strip_width(int m) {
  return static_cast<int>(2.0 * std::sqrt(static_cast<double>(m)));
}

double was_lambda(int m) { return 1.0 / harmonic_number(m); }

double was_statistic(const NodeField& field) {
  require_lattice2d(field.graph, "was_statistic");
  const LayeredDag& g = field.graph;
  const double* vals = field.values.data();
  const double lambda = was_lambda(g.depth());
  double t = 0.0;
  for (int i = 0; i < g.depth(); ++i) {
    const double* x = vals + g.layer_start(i);
    double s = 0.0;
    for (int64_t o = 0; o <= i; ++o) s += x[o];
    t += lambda / (i + 1) * s;
  }
  return t;
}

NullLaw was_null_law(int m) { return NullLaw{0.0, was_lambda(m)}; }

double was_mu95(int m, double alpha, double beta) {
  return (normal_quantile(1.0 - alpha) + normal_quantile(beta)) *
         std::sqrt(was_lambda(m));
}

Detector make_bayes_detector(const Family& fam, double theta) {
  BayesParams params{fam, theta};
  return Detector{"bayes",
                  [params](const NodeField& f) { return bayes_lr_dp(f, params); }};
}

Detector make_glrt_detector() {
  return Detector{"glrt", [](const NodeField& f) { return glrt_max_dp(f); }};
}

Detector make_strip_detector(int strip_width) {
  return Detector{"strip", [strip_width](const NodeField& f) {
                    return strip_statistic(f, strip_width).value;
                  }};
}

Detector make_was_detector() {
  return Detector{"was", [](const NodeField& f) { return was_statistic(f); }};
}

Detector make_root_detector() {
  return Detector{"root", [](const NodeField& f) { return f.values[0]; }};
}

}  // namespace trailscan
