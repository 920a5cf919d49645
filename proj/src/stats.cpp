#include "trailscan/stats.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace trailscan {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x * kInvSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x * kInvSqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  }
  // Bracketed Newton on the CDF; bisection fallback keeps iterates inside.
  double lo = -40.0, hi = 40.0, x = 0.0;
  for (int it = 0; it < 400; ++it) {
    double f = normal_cdf(x) - p;
    if (f > 0.0) {
      hi = x;
    } else {
      lo = x;
    }
    double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
    double nx = (pdf > 0.0) ? x - f / pdf : 0.5 * (lo + hi);
    if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
    if (std::abs(nx - x) <= 1e-14 * std::max(1.0, std::abs(nx))) return nx;
    x = nx;
  }
  return x;
}

double logsumexp2(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

double logsumexp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

double log_binom(int64_t n, int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n + 1)) -
         std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

double harmonic_number(int m) {
  if (m < 1) throw std::invalid_argument("harmonic_number: m must be >= 1");
  double s = 0.0;
  for (int i = m; i >= 1; --i) s += 1.0 / static_cast<double>(i);
  return s;
}

MeanSe mean_se(std::span<const double> v) {
  MeanSe out;
  if (v.empty()) return out;
  double s = 0.0;
  for (double x : v) s += x;
  out.mean = s / static_cast<double>(v.size());
  if (v.size() < 2) return out;
  double ss = 0.0;
  for (double x : v) {
    double d = x - out.mean;
    ss += d * d;
  }
  double var = ss / static_cast<double>(v.size() - 1);
  out.se = std::sqrt(var / static_cast<double>(v.size()));
  return out;
}

}  // namespace trailscan
