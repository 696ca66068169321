#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "mecsim/common.hpp"
#include "mecsim/evt.hpp"
#include "mecsim/rng.hpp"

using namespace mecsim;
using evt::Gpd;

TEST_CASE("gpd ccdf matches the exponential reference points") {
  for (double sigma : {0.5, 1.0, 40e6}) {
    const Gpd g{sigma, 0.0};
    CHECK(evt::gpd_ccdf(g, sigma) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(evt::gpd_ccdf(g, 3.0 * sigma) == doctest::Approx(std::exp(-3.0)).epsilon(1e-12));
    CHECK(evt::gpd_ccdf(g, 0.0) == 1.0);
  }
}

TEST_CASE("gpd ccdf support handling") {
  CHECK_THROWS_AS(evt::gpd_ccdf(Gpd{1.0, 0.3}, -0.1), std::domain_error);
  // beyond the upper endpoint for negative shape: 0, not an error
  CHECK(evt::gpd_ccdf(Gpd{1.0, -0.5}, 2.0 + 1e-9) == 0.0);
  CHECK(evt::gpd_ccdf(Gpd{1.0, -0.5}, 2.0) == doctest::Approx(0.0));
}

TEST_CASE("gpd ccdf is nonincreasing in x and nondecreasing in shape") {
  const double sigma = 2.0;
  for (double xi : {-0.4, -0.1, 0.0, 0.2, 0.45}) {
    double prev = 1.0;
    for (double x = 0.0; x <= 1.9; x += 0.01) {
      const double c = evt::gpd_ccdf(Gpd{sigma, xi}, x);
      CHECK(c <= prev + 1e-15);
      prev = c;
    }
  }
  for (double x : {0.1, 1.0, 1.9}) {
    double prev = 0.0;
    bool first = true;
    for (double xi : {-0.9, -0.3, 0.0, 0.3, 0.9}) {
      const double c = evt::gpd_ccdf(Gpd{sigma, xi}, x);
      if (!first) CHECK(c >= prev - 1e-15);
      prev = c;
      first = false;
    }
  }
}

TEST_CASE("gpd moments") {
  const auto m = evt::gpd_mean_var(Gpd{40.0, 0.3});
  REQUIRE(m.mean.has_value());
  CHECK(*m.mean == doctest::Approx(40.0 / 0.7));  // ~57.14

  const auto exp_m = evt::gpd_mean_var(Gpd{2.0, 0.0});
  CHECK(*exp_m.mean == doctest::Approx(2.0));
  CHECK(*exp_m.variance == doctest::Approx(4.0));

  const auto heavy = evt::gpd_mean_var(Gpd{1.0, 0.6});
  CHECK(heavy.mean.has_value());
  CHECK_FALSE(heavy.variance.has_value());
  CHECK_FALSE(evt::gpd_mean_var(Gpd{1.0, 1.2}).mean.has_value());
}

TEST_CASE("constraint targets") {
  const auto t = evt::constraint_targets(40.0, 0.3);
  CHECK(t.mean_bound == doctest::Approx(40.0 / 0.7));
  CHECK(t.second_moment_bound == doctest::Approx(2.0 * 1600.0 / (0.7 * 0.4)));  // 11428.6

  const auto exp_t = evt::constraint_targets(3.0, 0.0);
  CHECK(exp_t.mean_bound == doctest::Approx(3.0));
  CHECK(exp_t.second_moment_bound == doctest::Approx(18.0));

  CHECK_THROWS_AS(evt::constraint_targets(40.0, 0.6), ConfigError);
  CHECK_THROWS_AS(evt::constraint_targets(40.0, 0.5), ConfigError);
}

TEST_CASE("pwm fit round-trips known parameters") {
  RngStream rng(42, 7);
  const Gpd truth{40.0, 0.3};
  std::vector<double> samples(100000);
  for (auto& s : samples) s = evt::gpd_sample(truth, rng);

  const auto fit = evt::fit_gpd_pot(samples);
  CHECK(fit.exceedance_count == samples.size());
  CHECK(fit.gpd.scale > 38.0);
  CHECK(fit.gpd.scale < 42.0);
  CHECK(fit.gpd.shape > 0.27);
  CHECK(fit.gpd.shape < 0.33);
  CHECK(fit.ks_statistic < 0.02);
}

TEST_CASE("pwm fit of exponential data gives shape near zero") {
  RngStream rng(5, 11);
  std::vector<double> samples(100000);
  for (auto& s : samples) s = evt::gpd_sample(Gpd{7.5, 0.0}, rng);
  const auto fit = evt::fit_gpd_pot(samples);
  CHECK(fit.gpd.shape > -0.03);
  CHECK(fit.gpd.shape < 0.03);
  CHECK(fit.gpd.scale == doctest::Approx(7.5).epsilon(0.05));
}

TEST_CASE("fit rejects bad inputs") {
  std::vector<double> few(10, 1.0);
  CHECK_THROWS(evt::fit_gpd_pot(few));
  std::vector<double> constant(100, 3.0);
  CHECK_THROWS(evt::fit_gpd_pot(constant));
}

TEST_CASE("inverse-transform sampling matches the analytic mean") {
  RngStream rng(99, 3);
  const Gpd g{5.0, 0.3};
  double sum = 0.0;
  const int n = 1000000;
  for (int k = 0; k < n; ++k) sum += evt::gpd_sample(g, rng);
  const double mean = sum / n;
  CHECK(mean == doctest::Approx(5.0 / 0.7).epsilon(0.01));
}

TEST_CASE("ks distance vanishes against the generating distribution") {
  RngStream rng(1, 1);
  const Gpd g{1.0, 0.2};
  std::vector<double> samples(50000);
  for (auto& s : samples) s = evt::gpd_sample(g, rng);
  CHECK(evt::ks_distance(samples, g) < 0.01);
  // badly mismatched parameters are far away
  CHECK(evt::ks_distance(samples, Gpd{3.0, 0.2}) > 0.2);
}
