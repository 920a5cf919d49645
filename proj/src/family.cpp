#include "trailscan/family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace trailscan {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_domain(const Family& fam, double theta, const char* what) {
  if (!fam.in_domain(theta)) {
    throw std::invalid_argument(std::string(what) + ": theta " +
                                std::to_string(theta) + " outside domain of " +
                                fam.name());
  }
  return theta;
}

template <class Fn>
double golden_min(Fn&& f, double lo, double hi, double tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

Family Family::gaussian() { return Family(FamilyKind::gaussian); }
Family Family::exponential() { return Family(FamilyKind::exponential); }
Family Family::bernoulli() { return Family(FamilyKind::bernoulli); }

Family Family::from_name(const std::string& name) {
  if (name == "gaussian") return gaussian();
  if (name == "exponential") return exponential();
  if (name == "bernoulli") return bernoulli();
  throw std::invalid_argument("unknown family: " + name);
}

const char* Family::name() const {
  switch (kind_) {
    case FamilyKind::gaussian:
      return "gaussian";
    case FamilyKind::exponential:
      return "exponential";
    case FamilyKind::bernoulli:
      return "bernoulli";
  }
  return "?";
}

double Family::domain_lo() const { return -kInf; }

double Family::domain_hi() const {
  return kind_ == FamilyKind::exponential ? 1.0 : kInf;
}

double Family::psi(double theta) const {
  require_domain(*this, theta, "psi");
  switch (kind_) {
    case FamilyKind::gaussian:
      return 0.5 * theta * theta;
    case FamilyKind::exponential:
      return -std::log1p(-theta);
    case FamilyKind::bernoulli:
      // log((1 + e^t)/2), stable for large |t|
      return theta > 0 ? theta + std::log1p(std::exp(-theta)) - std::log(2.0)
                       : std::log1p(std::exp(theta)) - std::log(2.0);
  }
  return 0.0;
}

double Family::mean(double theta) const {
  require_domain(*this, theta, "mean");
  switch (kind_) {
    case FamilyKind::gaussian:
      return theta;
    case FamilyKind::exponential:
      return 1.0 / (1.0 - theta);
    case FamilyKind::bernoulli:
      return 1.0 / (1.0 + std::exp(-theta));
  }
  return 0.0;
}

double Family::variance(double theta) const {
  require_domain(*this, theta, "variance");
  switch (kind_) {
    case FamilyKind::gaussian:
      return 1.0;
    case FamilyKind::exponential: {
      double s = 1.0 - theta;
      return 1.0 / (s * s);
    }
    case FamilyKind::bernoulli: {
      double p = mean(theta);
      return p * (1.0 - p);
    }
  }
  return 0.0;
}

double Family::sample(double theta, Rng& rng) const {
  require_domain(*this, theta, "sample");
  switch (kind_) {
    case FamilyKind::gaussian:
      return std::normal_distribution<double>(theta, 1.0)(rng);
    case FamilyKind::exponential:
      return std::exponential_distribution<double>(1.0 - theta)(rng);
    case FamilyKind::bernoulli:
      return std::bernoulli_distribution(mean(theta))(rng) ? 1.0 : 0.0;
  }
  return 0.0;
}

void Family::fill_iid(std::span<double> out, double theta, Rng& rng) const {
  require_domain(*this, theta, "fill_iid");
  switch (kind_) {
    case FamilyKind::gaussian: {
      std::normal_distribution<double> d(theta, 1.0);
      for (double& x : out) x = d(rng);
      return;
    }
    case FamilyKind::exponential: {
      std::exponential_distribution<double> d(1.0 - theta);
      for (double& x : out) x = d(rng);
      return;
    }
    case FamilyKind::bernoulli: {
      std::bernoulli_distribution d(mean(theta));
      for (double& x : out) x = d(rng) ? 1.0 : 0.0;
      return;
    }
  }
}

namespace {

double psi_gap(const Family& fam, double theta) {
  if (!fam.in_domain(theta) || !fam.in_domain(2.0 * theta)) {
    throw std::invalid_argument(std::string("lambda_ratio: theta and 2*theta must lie in the domain of ") +
                                fam.name());
  }
  return fam.psi(2.0 * theta) - 2.0 * fam.psi(theta);
}

}  // namespace

double lambda_ratio(const Family& fam, double theta) {
  return std::exp(psi_gap(fam, theta));
}

double alpha(const Family& fam, double theta) {
  return std::sqrt(std::max(0.0, psi_gap(fam, theta)));
}

double chi_square(const Family& fam, double theta) {
  return std::expm1(psi_gap(fam, theta));
}

double f_rate(const Family& fam, double theta) {
  if (!(theta > 0.0)) throw std::invalid_argument("f_rate: theta must be > 0");
  require_domain(fam, theta, "f_rate");
  return (std::log(2.0) + fam.psi(theta)) / theta;
}

double xi_inf(const Family& fam, double t) {
  double hi = std::min(fam.domain_hi() - 1e-6, 64.0);
  auto g = [&](double th) { return fam.psi(th) - t * th; };
  double best = 0.0;  // boundary value at theta -> 0+
  double best_th = 0.0;
  const int grid = 256;
  for (int i = 1; i <= grid; ++i) {
    double th = hi * static_cast<double>(i) / grid;
    double v = g(th);
    if (v < best) {
      best = v;
      best_th = th;
    }
  }
  if (best_th > 0.0) {
    double a = std::max(1e-12, best_th - hi / grid);
    double b = std::min(hi, best_th + hi / grid);
    double th = golden_min(g, a, b, 1e-10);
    best = std::min(best, g(th));
  }
  return std::exp(std::min(best, 0.0));
}

ThetaStar theta_star(const Family& fam, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("theta_star: tol must be > 0");
  double a = std::max(lo, 1e-4);
  double b = std::min(hi, fam.domain_hi() - 1e-6);
  if (!(a < b)) throw std::invalid_argument("theta_star: empty search interval");
  auto f = [&](double th) { return f_rate(fam, th); };
  if (!std::isfinite(f(a)) || !std::isfinite(f(b))) {
    throw std::runtime_error("theta_star: f_rate not finite on interval");
  }
  double th = golden_min(f, a, b, tol);
  if (!std::isfinite(f(th))) {
    throw std::runtime_error("theta_star: f_rate not finite at minimizer");
  }
  // Unbounded when f is still descending at the right end; also when the
  // minimizer lands on the right end itself (derivative underflow guard).
  double h = 1e-6 * std::max(1.0, std::abs(b));
  double deriv = (f(b) - f(b - h)) / h;
  if (deriv < -1e-9 || th > b - 10.0 * tol) {
    ThetaStar out;
    out.value = std::numeric_limits<double>::infinity();
    out.f_min = std::numeric_limits<double>::quiet_NaN();
    out.unbounded = true;
    return out;
  }
  return ThetaStar{th, f(th), false};
}

}  // namespace trailscan
