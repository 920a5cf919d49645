#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "trailscan/family.hpp"
#include "trailscan/stats.hpp"

using namespace trailscan;

TEST_CASE("gaussian log-mgf and moments") {
  const Family fam = Family::gaussian();
  for (double t : {-1.5, 0.0, 0.3, 2.0}) {
    CHECK(fam.psi(t) == doctest::Approx(t * t / 2.0).epsilon(1e-15));
    CHECK(fam.mean(t) == doctest::Approx(t).epsilon(1e-15));
    CHECK(fam.variance(t) == doctest::Approx(1.0).epsilon(1e-15));
  }
  CHECK(fam.in_domain(1e12));
  CHECK(fam.in_domain(-1e12));
}

TEST_CASE("exponential log-mgf and moments") {
  const Family fam = Family::exponential();
  CHECK(fam.psi(0.3) == doctest::Approx(-std::log(0.7)).epsilon(1e-14));
  CHECK(fam.psi(0.0) == doctest::Approx(0.0));
  CHECK(fam.mean(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(fam.mean(0.5) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fam.variance(0.5) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(fam.in_domain(0.999));
  CHECK(!fam.in_domain(1.0));
  CHECK(fam.in_domain(-5.0));
}

TEST_CASE("bernoulli log-mgf and moments") {
  const Family fam = Family::bernoulli();
  CHECK(fam.psi(0.0) == doctest::Approx(0.0));
  CHECK(fam.psi(1.0) ==
        doctest::Approx(std::log1p(std::exp(1.0)) - std::log(2.0))
            .epsilon(1e-14));
  CHECK(fam.mean(0.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(fam.mean(1.0) ==
        doctest::Approx(std::exp(1.0) / (1.0 + std::exp(1.0))).epsilon(1e-14));
}

TEST_CASE("samplers hit the tilted moments") {
  const int n = 20000;
  std::vector<double> draws(n);
  struct Case {
    Family fam;
    double theta;
    double mean;
    double sd;
  };
  const Case cases[] = {
      {Family::gaussian(), 0.7, 0.7, 1.0},
      {Family::exponential(), 0.5, 2.0, 2.0},
      {Family::bernoulli(), 1.0, std::exp(1.0) / (1.0 + std::exp(1.0)), 0.5},
  };
  int idx = 0;
  for (const Case& c : cases) {
    Rng rng = make_rng(100 + idx++);
    c.fam.fill_iid(draws, c.theta, rng);
    const MeanSe ms = mean_se(draws);
    CHECK(std::abs(ms.mean - c.mean) < 5.0 * c.sd / std::sqrt(1.0 * n));
  }
  Rng rng = make_rng(5);
  for (int i = 0; i < 50; ++i) {
    const double b = Family::bernoulli().sample(2.0, rng);
    CHECK((b == 0.0 || b == 1.0));
  }
}

TEST_CASE("second-moment ratio and tilt exponent") {
  CHECK(lambda_ratio(Family::exponential(), 0.2) ==
        doctest::Approx(16.0 / 15.0).epsilon(1e-14));
  CHECK(alpha(Family::exponential(), 0.2) ==
        doctest::Approx(0.2540443291).epsilon(1e-9));
  CHECK(chi_square(Family::exponential(), 0.2) ==
        doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  for (double t : {0.3, 0.7, 1.1}) {
    CHECK(lambda_ratio(Family::gaussian(), t) ==
          doctest::Approx(std::exp(t * t)).epsilon(1e-14));
    CHECK(alpha(Family::gaussian(), t) == doctest::Approx(t).epsilon(1e-12));
  }
  CHECK_THROWS_AS((void)lambda_ratio(Family::exponential(), 0.6),
                  std::invalid_argument);
}

TEST_CASE("rate transform values") {
  CHECK(f_rate(Family::exponential(), 0.5) ==
        doctest::Approx(2.7725887222).epsilon(1e-9));
  CHECK(f_rate(Family::bernoulli(), 1.0) ==
        doctest::Approx(1.3132616875).epsilon(1e-9));
  CHECK(f_rate(Family::gaussian(), 1.0) ==
        doctest::Approx(std::log(2.0) + 0.5).epsilon(1e-12));
}

TEST_CASE("optimal tilt per family") {
  const ThetaStar tg = theta_star(Family::gaussian());
  CHECK(!tg.unbounded);
  CHECK(std::abs(tg.value - std::sqrt(2.0 * std::log(2.0))) < 1e-6);
  CHECK(tg.f_min ==
        doctest::Approx(std::sqrt(2.0 * std::log(2.0))).epsilon(1e-9));

  const ThetaStar te = theta_star(Family::exponential());
  CHECK(!te.unbounded);
  CHECK(std::abs(te.value - 0.626635382298) < 1e-5);
  CHECK(te.f_min == doctest::Approx(2.678346990017).epsilon(1e-9));
  const double shift =
      Family::exponential().mean(te.value) - Family::exponential().mean(0.0);
  CHECK(std::abs(shift - 1.678346990017) < 1e-3);

  CHECK(theta_star(Family::bernoulli()).unbounded);
}

TEST_CASE("tilt envelope") {
  CHECK(xi_inf(Family::gaussian(), 1.0) ==
        doctest::Approx(std::exp(-0.5)).epsilon(1e-6));
  CHECK(xi_inf(Family::gaussian(), theta_star(Family::gaussian()).f_min) ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(xi_inf(Family::exponential(), theta_star(Family::exponential()).f_min) ==
        doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("family lookup by name") {
  CHECK(Family::from_name("gaussian").kind() == FamilyKind::gaussian);
  CHECK(Family::from_name("exponential").kind() == FamilyKind::exponential);
  CHECK(Family::from_name("bernoulli").kind() == FamilyKind::bernoulli);
  CHECK_THROWS_AS((void)Family::from_name("cauchy"), std::invalid_argument);
}
