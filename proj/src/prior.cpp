#include "trailscan/prior.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "trailscan/stats.hpp"

namespace trailscan {

const char* to_string(PriorKind kind) {
  switch (kind) {
    case PriorKind::uniform:
      return "uniform";
    case PriorKind::hm:
      return "hm";
    case PriorKind::independent_uniform:
      return "independent_uniform";
  }
  return "?";
}

PriorKind prior_kind_from_name(const std::string& name) {
  if (name == "uniform") return PriorKind::uniform;
  if (name == "hm") return PriorKind::hm;
  if (name == "independent_uniform") return PriorKind::independent_uniform;
  throw std::invalid_argument("unknown prior: " + name);
}

PriorSpec PriorSpec::uniform() { return PriorSpec{PriorKind::uniform, {}}; }

PriorSpec PriorSpec::hm(std::vector<double> a_seq) {
  return PriorSpec{PriorKind::hm, std::move(a_seq)};
}

PriorSpec PriorSpec::independent_uniform() {
  return PriorSpec{PriorKind::independent_uniform, {}};
}

PathSteps PriorSample::as_steps(const LayeredDag& g) const {
  if (!edge_path) {
    throw std::logic_error(
        "as_steps: sample is a vertex sequence, not an edge path");
  }
  return steps_from_vertices(g, vertices);
}

namespace {

double check_a_seq(const std::vector<double>& a_seq) {
  double sum = 0.0;
  for (double a : a_seq) {
    if (a < 0.0) throw std::invalid_argument("hm: amplitudes must be >= 0");
    sum += a;
  }
  if (!(sum < 0.5)) {
    throw std::invalid_argument(
        "hm: sum of block amplitudes must be < 1/2, got " + std::to_string(sum));
  }
  return sum;
}

inline int uniform_sign(Rng& rng) { return (rng() >> 63) ? 1 : -1; }
inline int uniform_bit(Rng& rng) { return static_cast<int>(rng() >> 63); }

}  // namespace

std::vector<double> hm_environment(const std::vector<double>& a_seq, int m,
                                   Rng& rng) {
  check_a_seq(a_seq);
  if (m < 1) throw std::invalid_argument("hm_environment: m must be >= 1");
  std::vector<double> p(static_cast<size_t>(m > 0 ? m - 1 : 0), 0.5);
  for (size_t j = 0; j < a_seq.size(); ++j) {
    if (a_seq[j] == 0.0) continue;
    std::uniform_real_distribution<double> draw(-a_seq[j], a_seq[j]);
    double block_value = 0.0;
    int64_t block = -1;
    for (int i = 1; i <= m - 1; ++i) {
      int64_t b = (i - 1) >> j;  // block covering indices (b 2^j, (b+1) 2^j]
      if (b != block) {
        block = b;
        block_value = draw(rng);
      }
      p[i - 1] += block_value;
    }
  }
  return p;
}

std::vector<double> hm_sequence(int m) {
  if (m <= 4) throw std::invalid_argument("hm_sequence: m must be > 4");
  double l = std::log2(static_cast<double>(m));
  int jmax = static_cast<int>(std::floor(l));
  std::vector<double> a(static_cast<size_t>(jmax) + 1, 1.0 / (3.0 * l));
  return a;
}

PriorSample sample_prior_path(const PriorSpec& spec, const LayeredDag& g,
                              Rng& rng) {
  PriorSample out;
  int m = g.depth();
  out.vertices.resize(static_cast<size_t>(m));
  out.vertices[0] = NodeRef{0, 0};
  switch (spec.kind) {
    case PriorKind::uniform: {
      switch (g.kind()) {
        case GraphKind::lattice2d: {
          int64_t o = 0;
          for (int i = 1; i < m; ++i) {
            o += (uniform_sign(rng) > 0) ? 1 : 0;
            out.vertices[i] = NodeRef{i, o};
          }
          break;
        }
        case GraphKind::tree: {
          int64_t o = 0;
          for (int i = 1; i < m; ++i) {
            o = 2 * o + uniform_bit(rng);
            out.vertices[i] = NodeRef{i, o};
          }
          break;
        }
        case GraphKind::lattice_hd: {
          std::vector<int64_t> c(g.dim(), 0);
          for (int i = 1; i < m; ++i) {
            int64_t o = 0;
            for (int a = 0; a < g.dim(); ++a) c[a] += (uniform_sign(rng) > 0);
            for (int a = g.dim() - 1; a >= 0; --a) o = o * (i + 1) + c[a];
            out.vertices[i] = NodeRef{i, o};
          }
          break;
        }
      }
      break;
    }
    case PriorKind::hm: {
      if (g.kind() != GraphKind::lattice2d) {
        throw std::invalid_argument("hm prior requires a lattice2d graph");
      }
      std::vector<double> p = hm_environment(spec.a_seq, m, rng);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      int64_t o = 0;
      for (int i = 1; i < m; ++i) {
        o += (u(rng) < p[i - 1]) ? 1 : 0;
        out.vertices[i] = NodeRef{i, o};
      }
      break;
    }
    case PriorKind::independent_uniform: {
      out.edge_path = false;
      for (int i = 1; i < m; ++i) {
        std::uniform_int_distribution<int64_t> pick(0, g.layer_size(i) - 1);
        out.vertices[i] = NodeRef{i, pick(rng)};
      }
      break;
    }
  }
  return out;
}

int crossing_count(const LayeredDag& g, const PathSteps& p, const PathSteps& q) {
  std::vector<NodeRef> vp = path_vertices(g, p);
  std::vector<NodeRef> vq = path_vertices(g, q);
  int n = 0;
  for (int i = 0; i < g.depth(); ++i) n += (vp[i].offset == vq[i].offset);
  return n;
}

int crossing_count(const LayeredDag& g, const PriorSample& p,
                   const PriorSample& q) {
  if (static_cast<int>(p.vertices.size()) != g.depth() ||
      static_cast<int>(q.vertices.size()) != g.depth()) {
    throw std::invalid_argument("crossing_count: samples do not match graph");
  }
  int n = 0;
  for (int i = 0; i < g.depth(); ++i) {
    n += (p.vertices[i].offset == q.vertices[i].offset);
  }
  return n;
}

double CrossingLaw::sum() const {
  return std::accumulate(pmf.begin(), pmf.end(), 0.0);
}

CrossingLaw lattice_crossing_pmf(int n) {
  if (n < 1) throw std::invalid_argument("lattice_crossing_pmf: n must be >= 1");
  CrossingLaw law;
  law.pmf.resize(static_cast<size_t>(n) + 1);
  const double log2 = std::log(2.0);
  for (int k = 0; k <= n; ++k) {
    law.pmf[k] = std::exp(log_binom(2 * n - k, n) - (2 * n - k) * log2);
  }
  return law;
}

CrossingLaw lattice_crossing_enum(int n) {
  if (n < 1 || n > 12) {
    throw std::invalid_argument("lattice_crossing_enum: n must be in [1,12]");
  }
  const int paths = 1 << n;
  // positions after each step, one row per step string
  std::vector<int8_t> pos(static_cast<size_t>(paths) * n);
  for (int a = 0; a < paths; ++a) {
    int8_t s = 0;
    for (int i = 0; i < n; ++i) {
      s += ((a >> i) & 1) ? 1 : -1;
      pos[static_cast<size_t>(a) * n + i] = s;
    }
  }
  std::vector<int64_t> counts(static_cast<size_t>(n) + 1, 0);
  for (int a = 0; a < paths; ++a) {
    const int8_t* pa = &pos[static_cast<size_t>(a) * n];
    for (int b = 0; b < paths; ++b) {
      const int8_t* pb = &pos[static_cast<size_t>(b) * n];
      int k = 0;
      for (int i = 0; i < n; ++i) k += (pa[i] == pb[i]);
      ++counts[k];
    }
  }
  CrossingLaw law;
  law.pmf.resize(static_cast<size_t>(n) + 1);
  double total = static_cast<double>(paths) * paths;
  for (int k = 0; k <= n; ++k) law.pmf[k] = counts[k] / total;
  return law;
}

double lattice_crossing_upper(int k, int n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) {
    throw std::invalid_argument("lattice_crossing_upper: eps must be in (0, 1/2)");
  }
  if (k < 0 || k > n) {
    throw std::invalid_argument("lattice_crossing_upper: need 0 <= k <= n");
  }
  double decay = std::exp(-static_cast<double>(k) * k / (4.0 * n));
  double b = (k <= eps * n) ? std::sqrt((1.0 + eps) / (kPi * n)) * decay
                            : decay / std::sqrt(kPi);
  return std::min(1.0, b);
}

CrossingLaw tree_crossing_pmf(int m) {
  if (m < 1) throw std::invalid_argument("tree_crossing_pmf: m must be >= 1");
  CrossingLaw law;
  law.pmf.assign(static_cast<size_t>(m) + 1, 0.0);
  for (int k = 1; k < m; ++k) law.pmf[k] = std::ldexp(1.0, -k);
  law.pmf[m] = std::ldexp(1.0, -(m - 1));
  return law;
}

ProfileBound pred_profile_bound(int64_t k, const std::vector<double>& a_seq) {
  if (k < 1) throw std::invalid_argument("pred_profile_bound: k must be >= 1");
  int idx = static_cast<int>(std::bit_width(static_cast<uint64_t>(k))) - 2;
  if (idx < 0 || idx >= static_cast<int>(a_seq.size()) || a_seq[idx] == 0.0) {
    return ProfileBound{1.0, true};
  }
  return ProfileBound{std::min(1.0, 20.0 / (static_cast<double>(k) * a_seq[idx])),
                      false};
}

ProfileEstimate pred_profile_estimate(const PriorSpec& spec, int n, int k,
                                      int histories, int continuations,
                                      Rng& rng) {
  if (continuations < 100) {
    throw std::invalid_argument(
        "pred_profile_estimate: need at least 100 continuations");
  }
  if (n < 0 || k < 1 || histories < 1) {
    throw std::invalid_argument("pred_profile_estimate: bad horizon");
  }
  double best = 0.0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int64_t> hist;
  for (int h = 0; h < histories; ++h) {
    int64_t best_count = 0;
    if (spec.kind == PriorKind::independent_uniform) {
      // position at step n+k is uniform on a layer of size n+k+1 regardless
      // of history
      hist.assign(static_cast<size_t>(n + k) + 1, 0);
      std::uniform_int_distribution<int64_t> pick(0, n + k);
      for (int c = 0; c < continuations; ++c) {
        best_count = std::max(best_count, ++hist[pick(rng)]);
      }
    } else {
      std::vector<double> p;
      if (spec.kind == PriorKind::hm) {
        p = hm_environment(spec.a_seq, n + k + 1, rng);
      } else {
        p.assign(static_cast<size_t>(n + k), 0.5);
      }
      int64_t s = 0;
      for (int i = 1; i <= n; ++i) s += (u(rng) < p[i - 1]) ? 1 : -1;
      // displacement over the k continuation steps lies in [-k, k]
      hist.assign(2 * static_cast<size_t>(k) + 1, 0);
      for (int c = 0; c < continuations; ++c) {
        int64_t d = 0;
        for (int i = n + 1; i <= n + k; ++i) d += (u(rng) < p[i - 1]) ? 1 : -1;
        best_count = std::max(best_count, ++hist[d + k]);
      }
    }
    best = std::max(best, static_cast<double>(best_count) / continuations);
  }
  return ProfileEstimate{best, binom_se(best, continuations)};
}

TailFit intersection_tail_fit(const PriorSpec& spec, const LayeredDag& g,
                              int64_t samples, Rng& rng) {
  if (samples < 10000) {
    throw std::invalid_argument("intersection_tail_fit: need >= 10^4 samples");
  }
  std::vector<int64_t> counts(static_cast<size_t>(g.depth()) + 1, 0);
  for (int64_t s = 0; s < samples; ++s) {
    PriorSample p = sample_prior_path(spec, g, rng);
    PriorSample q = sample_prior_path(spec, g, rng);
    ++counts[crossing_count(g, p, q)];
  }
  // survival counts from above, kept while at least 30 observations remain
  std::vector<double> ks, logp;
  int64_t tail = 0;
  std::vector<double> surv(counts.size(), 0.0);
  for (int k = static_cast<int>(counts.size()) - 1; k >= 0; --k) {
    tail += counts[k];
    surv[k] = static_cast<double>(tail);
  }
  for (int k = 1; k < static_cast<int>(surv.size()); ++k) {
    if (surv[k] < 30.0) break;
    ks.push_back(k);
    logp.push_back(std::log(surv[k] / static_cast<double>(samples)));
  }
  if (ks.size() < 2 ||
      *std::max_element(logp.begin(), logp.end()) ==
          *std::min_element(logp.begin(), logp.end())) {
    throw std::runtime_error(
        "intersection_tail_fit: degenerate crossing distribution");
  }
  double n = static_cast<double>(ks.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < ks.size(); ++i) {
    sx += ks[i];
    sy += logp[i];
    sxx += ks[i] * ks[i];
    sxy += ks[i] * logp[i];
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) {
    throw std::runtime_error("intersection_tail_fit: degenerate fit");
  }
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  return TailFit{std::exp(intercept), std::exp(slope),
                 static_cast<int>(ks.size())};
}

double indep_uniform_mgf(double t, int m) {
  if (m < 1) throw std::invalid_argument("indep_uniform_mgf: m must be >= 1");
  double e = std::expm1(t);
  double acc = 0.0;
  for (int i = 1; i <= m; ++i) acc += std::log1p(e / i);
  return std::exp(acc);
}

}  // namespace trailscan
