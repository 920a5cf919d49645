#pragma once

#include <span>
#include <string>

#include "trailscan/rng.hpp"

namespace trailscan {

enum class FamilyKind { gaussian, exponential, bernoulli };

// One-parameter exponential tilt of a base law F0: under theta, the density
// w.r.t. F0 is exp(theta * x - psi(theta)) with psi the log-MGF of F0.
class Family {
 public:
  static Family gaussian();
  static Family exponential();
  static Family bernoulli();
  static Family from_name(const std::string& name);

  FamilyKind kind() const { return kind_; }
  const char* name() const;

  double psi(double theta) const;
  double mean(double theta) const;      // psi'
  double variance(double theta) const;  // psi''
  double domain_lo() const;
  double domain_hi() const;
  bool in_domain(double theta) const {
    return theta > domain_lo() && theta < domain_hi();
  }

  double sample(double theta, Rng& rng) const;
  void fill_iid(std::span<double> out, double theta, Rng& rng) const;

 private:
  explicit Family(FamilyKind kind) : kind_(kind) {}
  FamilyKind kind_;
};

double lambda_ratio(const Family& fam, double theta);  // exp(psi(2t) - 2 psi(t))
double alpha(const Family& fam, double theta);         // sqrt(log lambda_ratio)
double f_rate(const Family& fam, double theta);        // (log 2 + psi(theta)) / theta
double chi_square(const Family& fam, double theta);    // lambda_ratio - 1
double xi_inf(const Family& fam, double t);            // inf_{theta>0} exp(psi(theta) - t*theta)

struct ThetaStar {
  double value = 0.0;  // +inf when unbounded
  double f_min = 0.0;  // meaningful only when !unbounded
  bool unbounded = false;
};

// Minimizes f_rate over (lo, hi) intersected with the family domain.
ThetaStar theta_star(const Family& fam, double lo = 1e-4, double hi = 16.0,
                     double tol = 1e-7);

}  // namespace trailscan
