#pragma once

#include <cmath>
#include <cstdint>
#include <span>

namespace trailscan {

inline constexpr double kPi = 3.14159265358979323846;

double normal_cdf(double x);
double normal_sf(double x);
double normal_quantile(double p);  // absolute error below 1e-9

double logsumexp2(double a, double b);
double logsumexp(std::span<const double> v);

double log_binom(int64_t n, int64_t k);

double harmonic_number(int m);

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};
MeanSe mean_se(std::span<const double> v);

inline double binom_se(double p, int64_t n) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace trailscan
