#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "trailscan/analysis.hpp"
#include "trailscan/family.hpp"
#include "trailscan/graph.hpp"
#include "trailscan/prior.hpp"

using namespace trailscan;

TEST_CASE("closed-form tree likelihood-ratio variance") {
  CHECK(tree_var_lm(0.5, 10) == doctest::Approx(0.7839562529).epsilon(2e-9));

  // same quantity through the crossing law: E e^(mu^2 N) - 1
  const CrossingLaw law = tree_crossing_pmf(10);
  const double lambda = std::exp(0.25);
  double ev = 0.0;
  for (int k = 1; k <= 10; ++k) ev += law.prob(k) * std::pow(lambda, k);
  CHECK(tree_var_lm(0.5, 10) == doctest::Approx(ev - 1.0).epsilon(1e-12));

  // tau = 1 limit: mu = sqrt(log 2) gives exactly m
  CHECK(tree_var_lm(std::sqrt(std::log(2.0)), 7) ==
        doctest::Approx(7.0).epsilon(1e-9));
}

TEST_CASE("crossing-sampled variance matches the two-path enumeration") {
  // m = 2 uniform lattice prior: crossings are 2 (same path, prob 1/2)
  // or 1 (split at the root), so E e^(a^2 N) - 1 has a closed form.
  const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, 2);
  const double a = 0.3;
  const double exact =
      0.5 * (std::exp(2 * a * a) + std::exp(a * a)) - 1.0;
  const VarEstimate v =
      var_lm_from_crossings(PriorSpec::uniform(), g, a, 40000, 321);
  CHECK(!v.capped);
  CHECK(std::abs(v.value - exact) <= 4.0 * v.se);
  CHECK(v.se > 0.0);

  const VarEstimate huge =
      var_lm_from_crossings(PriorSpec::uniform(), g, 30.0, 1000, 321);
  CHECK(huge.capped);
}

TEST_CASE("risk floor from the variance") {
  CHECK(bayes_risk_lb(0.0) == doctest::Approx(1.0));
  CHECK(bayes_risk_lb(1.0) == doctest::Approx(0.5));
  CHECK(bayes_risk_lb(4.0) == doctest::Approx(0.0));
  CHECK(bayes_risk_lb(100.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS((void)bayes_risk_lb(-0.1), std::invalid_argument);
}

TEST_CASE("simulated Bayes risk at the extremes") {
  const LayeredDag g = LayeredDag::build(GraphKind::lattice2d, 2);
  const Family fam = Family::gaussian();

  const RiskEstimate weak =
      bayes_risk_mc(g, fam, 0.1, PriorSpec::uniform(), 500, 88);
  CHECK(weak.risk >= 0.8);

  const RiskEstimate strong =
      bayes_risk_mc(g, fam, 5.0, PriorSpec::uniform(), 500, 88);
  CHECK(strong.risk <= 0.05);
  CHECK(strong.type1 >= 0.0);
  CHECK(strong.type2 >= 0.0);
  CHECK(strong.risk ==
        doctest::Approx(strong.type1 + strong.type2).epsilon(1e-12));
}

TEST_CASE("tree max-statistic false-alarm bound") {
  CHECK(tree_glrt_type1_bound(1) == doctest::Approx(0.1694151879).epsilon(1e-9));
  CHECK(tree_glrt_type1_bound(16) ==
        doctest::Approx(0.0423537970).epsilon(1e-8));
  CHECK(tree_glrt_type1_bound(64) < tree_glrt_type1_bound(16));
  CHECK_THROWS_AS((void)tree_glrt_type1_bound(0), std::invalid_argument);
}

TEST_CASE("second-moment nondetectability condition") {
  CHECK(nondetectability_criterion(0.1, 0.5));       // 0.1 < 1
  CHECK(!nondetectability_criterion(1.5, 0.5));      // 1.5 >= 1
  CHECK(nondetectability_criterion(1.0 / 15.0, 0.9));
  CHECK(!nondetectability_criterion(0.2, 0.9));      // 0.2 >= 1/0.9 - 1
  CHECK_THROWS_AS((void)nondetectability_criterion(0.1, 0.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)nondetectability_criterion(0.1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS((void)nondetectability_criterion(-0.1, 0.5),
                  std::invalid_argument);
}
