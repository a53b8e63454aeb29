#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "gamedyn/stats.h"

using namespace gamedyn::stats;

TEST_CASE("reg_inc_beta examples") {
  CHECK(reg_inc_beta(0.5, 1, 1) == doctest::Approx(0.5));
  CHECK(std::abs(reg_inc_beta(0.2, 1, 3) - 0.488) < 1e-12);
  CHECK(reg_inc_beta(0, 2, 3) == 0.0);
  CHECK(reg_inc_beta(1, 2, 3) == 1.0);
  CHECK_THROWS_AS(reg_inc_beta(1.5, 1, 1), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 0, 1), std::domain_error);
  CHECK_THROWS_AS(reg_inc_beta(0.5, 1, -1), std::domain_error);
}

TEST_CASE("reg_inc_beta closed forms and symmetry") {
  double worst = 0;
  for (int k = 0; k <= 100; ++k) {
    const double x = k / 100.0;
    for (double b : {0.5, 3.0, 17.0}) {
      CHECK(std::abs(reg_inc_beta(x, 1, b) - (1 - std::pow(1 - x, b))) < 1e-10);
      worst = std::max(worst, std::abs(reg_inc_beta(x, 2.5, b) - (1 - reg_inc_beta(1 - x, b, 2.5))));
    }
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("beta_quantile inverts reg_inc_beta") {
  for (double t : {0.0025, 0.3, 0.9975}) {
    const double p = beta_quantile(t, 4, 9);
    CHECK(std::abs(reg_inc_beta(p, 4, 9) - t) < 1e-9);
  }
}

TEST_CASE("clopper_pearson closed forms") {
  const double c = std::pow(0.0025, 0.1);
  const auto zero = clopper_pearson(0, 10, 0.995);
  CHECK(zero.lo == 0.0);
  CHECK(std::abs(zero.hi - (1 - c)) < 1e-9);
  CHECK(zero.hi == doctest::Approx(0.4507).epsilon(1e-3));
  const auto all = clopper_pearson(10, 10, 0.995);
  CHECK(all.hi == 1.0);
  CHECK(std::abs(all.lo - c) < 1e-9);
  const auto half = clopper_pearson(5, 10, 0.995);
  CHECK(half.lo < 0.5);
  CHECK(half.hi > 0.5);
  CHECK(std::abs((0.5 - half.lo) - (half.hi - 0.5)) < 1e-9);
  CHECK(half.point == 0.5);
  CHECK(half.confidence == 0.995);
}

TEST_CASE("clopper_pearson rejects bad counts") {
  CHECK_THROWS(clopper_pearson(-1, 10));
  CHECK_THROWS(clopper_pearson(11, 10));
  CHECK_THROWS(clopper_pearson(0, 0));
  CHECK_THROWS(clopper_pearson(1, 10, 1.0));
}

TEST_CASE("property: clopper_pearson monotone in k and symmetric") {
  for (int s : {1, 13, 200}) {
    double prev_lo = -1, prev_hi = -1;
    for (int k = 0; k <= s; ++k) {
      const auto ci = clopper_pearson(k, s);
      CHECK(ci.lo <= ci.point);
      CHECK(ci.point <= ci.hi);
      CHECK(ci.lo >= 0.0);
      CHECK(ci.hi <= 1.0);
      CHECK(ci.lo >= prev_lo);
      CHECK(ci.hi >= prev_hi);
      prev_lo = ci.lo;
      prev_hi = ci.hi;
      const auto mirror = clopper_pearson(s - k, s);
      CHECK(std::abs(ci.lo - (1 - mirror.hi)) < 1e-9);
    }
  }
}

TEST_CASE("property: coverage over simulated binomial data") {
  std::mt19937_64 rng(2024);
  int covered = 0;
  const int datasets = 2000;
  const double ps[] = {0.1, 0.5, 0.9};
  for (int d = 0; d < datasets; ++d) {
    const double p = ps[d % 3];
    const int k = std::binomial_distribution<int>(200, p)(rng);
    const auto ci = clopper_pearson(k, 200);
    covered += ci.lo <= p && p <= ci.hi;
  }
  CHECK(covered >= 0.99 * datasets);
}

TEST_CASE("mean_and_se examples") {
  const std::vector<double> flat{3, 3, 3, 3};
  const auto a = mean_and_se(flat);
  CHECK(a.mean == 3.0);
  CHECK(a.se == 0.0);
  CHECK(a.count == 4);
  CHECK_FALSE(a.single_sample);
  const std::vector<double> two{0, 2};
  const auto b = mean_and_se(two);
  CHECK(b.mean == 1.0);
  CHECK(b.se == doctest::Approx(1.0));
  const std::vector<double> one{4.25};
  const auto c = mean_and_se(one);
  CHECK(c.mean == 4.25);
  CHECK(c.se == 0.0);
  CHECK(c.single_sample);
  CHECK_THROWS_AS(mean_and_se(std::vector<double>{}), std::invalid_argument);
}
