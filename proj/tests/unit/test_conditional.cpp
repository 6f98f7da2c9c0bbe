#include "../oracles.hpp"
#include "vcrisk/conditional.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace vcrisk;

namespace {
const StressLevels kAlpha{0.95, 0.95};
}

TEST_CASE("stress levels") {
  CHECK_THROWS_AS(StressLevels({0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(StressLevels({-0.1}), DomainError);
  CHECK_NOTHROW(StressLevels({0.0, 0.0}));
  CHECK_THROWS_AS(ConditionalDistortion(Copula::gumbel(4, 2.0), kAlpha, StressMode::AtLeastOne), DomainError);
}

TEST_CASE("independence gives the identity distortion") {
  const auto ind = Copula::independence(3);
  for (auto mode : {StressMode::AtLeastOne, StressMode::All, StressMode::Single}) {
    const ConditionalDistortion cd(ind, StressLevels{0.3, 0.8}, mode, 1);
    for (double v : {0.0, 0.1, 0.5, 0.93, 1.0}) CHECK(cd.cdf(v) == doctest::Approx(v).epsilon(1e-13));
    CHECK(cd.inverse_cdf(0.7) == doctest::Approx(0.7).epsilon(1e-13));
    CHECK(cd.upper_inverse(1e-9) == doctest::Approx(1e-9).epsilon(1e-10));
  }
}

TEST_CASE("Gumbel forward and inverse example") {
  const ConditionalDistortion cd(Copula::gumbel(3, 2.0), kAlpha, StressMode::AtLeastOne);
  CHECK(std::abs(cd.cdf(0.95) - oracle::gumbel2_cdf_at_least_one_095) < 1e-14);
  CHECK(cd.inverse_cdf(oracle::gumbel2_cdf_at_least_one_095) == doctest::Approx(0.95).epsilon(1e-13));
  CHECK(cd.inverse_cdf(0.50035) == doctest::Approx(0.95).epsilon(1e-5));
}

TEST_CASE("distortion property and round trip across modes") {
  for (double theta : {1.0, 1.5, 2.0, 3.0}) {
    const auto c = Copula::gumbel(3, theta);
    for (auto mode : {StressMode::AtLeastOne, StressMode::All, StressMode::Single}) {
      for (int index : {0, 1}) {
        const ConditionalDistortion cd(c, StressLevels{0.9, 0.95}, mode, index);
        CHECK(check_distortion_property(cd).holds);
        for (int j = 1; j < 100; ++j) {
          const double beta = j / 100.0;
          CHECK(std::abs(cd.cdf(cd.inverse_cdf(beta)) - beta) < 1e-10);
          if (j > 1) CHECK(cd.inverse_cdf(beta) >= cd.inverse_cdf(beta - 0.01));
        }
      }
    }
  }
}

TEST_CASE("upper tail functions agree with the cdf") {
  const ConditionalDistortion cd(Copula::gumbel(3, 2.0), kAlpha, StressMode::AtLeastOne);
  const ConditionalDistortion all(Copula::gumbel(3, 2.0), kAlpha, StressMode::All);
  for (const auto* d : {&cd, &all}) {
    for (double r : {0.3, 0.05, 1e-3}) CHECK(d->tail(r) == doctest::Approx(1.0 - d->cdf(1.0 - r)).epsilon(1e-9));
    for (double eps : {0.2, 0.05, 1e-3}) {
      CHECK(d->upper_inverse(eps) == doctest::Approx(1.0 - d->inverse_cdf(1.0 - eps)).epsilon(1e-9));
    }
    // Deep in the tail 1 - v is resolved with relative accuracy.
    const double tiny = d->upper_inverse(1e-13);
    CHECK(tiny > 0.0);
    CHECK(d->tail(tiny) == doctest::Approx(1e-13).epsilon(1e-9));
  }
}

TEST_CASE("density integrates the cdf") {
  const ConditionalDistortion cd(Copula::gumbel(3, 2.0), kAlpha, StressMode::AtLeastOne);
  for (double v : {0.2, 0.5, 0.97}) {
    const double h = 1e-6;
    CHECK(cd.density(v) == doctest::Approx((cd.cdf(v + h) - cd.cdf(v - h)) / (2 * h)).epsilon(1e-6));
  }
}

TEST_CASE("degenerate events") {
  const ConditionalDistortion sure(Copula::gumbel(3, 2.0), StressLevels{0.0, 0.0}, StressMode::AtLeastOne);
  CHECK(sure.event_probability() == doctest::Approx(1.0));
  CHECK(sure.cdf(0.4) == doctest::Approx(0.4).epsilon(1e-14));
  // Lower Frechet bound generator: P(U_1 > 1/2, U_2 > 1/2) = 0.
  ArchimedeanGenerator lower;
  lower.psi = [](double t) { return 1.0 - t; };
  lower.psi_inverse = [](double s) { return std::max(1.0 - s, 0.0); };
  const auto degenerate = Copula::archimedean(3, lower);
  CHECK_THROWS_AS(ConditionalDistortion(degenerate, StressLevels{0.5, 0.5}, StressMode::All), DegenerateEventError);
}

TEST_CASE("TVaR distortion") {
  CHECK(tvar_distortion(0.95, 0.95) == 0.0);
  CHECK(tvar_distortion(1.0, 0.95) == 1.0);
  CHECK(tvar_distortion(0.975, 0.95) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(tvar_distortion(0.3, 0.95) == 0.0);
}

TEST_CASE("l-condition") {
  const auto g2 = Copula::gumbel(3, 2.0);
  const auto g3 = Copula::gumbel(3, 3.0);
  for (double v : {0.1, 0.5, 1.0}) CHECK(l_ratio(g2, g2, kAlpha, v) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(check_l_condition(g2, g3, kAlpha).holds);
  const auto reverse = check_l_condition(g3, g2, kAlpha);
  CHECK_FALSE(reverse.holds);
  CHECK(reverse.max_violation > 0.1);
  // Pointwise: l >= l(1) exactly when F under c1 dominates F under c2.
  const ConditionalDistortion f2(g2, kAlpha, StressMode::AtLeastOne);
  const ConditionalDistortion f3(g3, kAlpha, StressMode::AtLeastOne);
  for (int j = 1; j < 100; ++j) CHECK(f2.cdf(j / 100.0) >= f3.cdf(j / 100.0) - 1e-14);
  CHECK_THROWS_AS(l_ratio(g2, g3, kAlpha, 0.0), DomainError);
}

TEST_CASE("s-condition") {
  const auto ind = Copula::independence(3);
  for (double v : {0.1, 0.4, 0.9}) {
    CHECK(s_ratio(ind, kAlpha, 0, v) == doctest::Approx(s_ratio(ind, kAlpha, 0, 1.0)).epsilon(1e-12));
  }
  const auto g = Copula::gumbel(3, 2.0);
  const double at_one = s_ratio(g, kAlpha, 0, 1.0);
  const Vector alpha_one = (Vector(3) << 0.95, 0.95, 1.0).finished();
  CHECK(at_one == doctest::Approx((1.0 - g(alpha_one)) / (1.0 - 0.95)).epsilon(1e-13));
  // For Gumbel(2) the ratio is larger below 1, so the conditional cdf given one
  // stressed institution dominates that given at least one.
  const auto cert = check_s_condition(g, kAlpha, 0);
  CHECK_FALSE(cert.holds);
  const ConditionalDistortion any(g, kAlpha, StressMode::AtLeastOne);
  const ConditionalDistortion single(g, kAlpha, StressMode::Single, 0);
  for (int j = 1; j < 100; ++j) {
    const double v = j / 100.0;
    const bool s_above = s_ratio(g, kAlpha, 0, v) >= at_one;
    CHECK(s_above == (any.cdf(v) >= single.cdf(v)));
  }
  CHECK_THROWS_AS(s_ratio(g, kAlpha, 2, 0.5), DomainError);
}

TEST_CASE("LTD copulas stochastically increase V under the event") {
  for (double theta : {1.0, 2.0, 3.0}) {
    const auto c = Copula::gumbel(3, theta);
    REQUIRE(is_ltd_last(c));
    const ConditionalDistortion cd(c, kAlpha, StressMode::AtLeastOne);
    for (int j = 0; j <= 100; ++j) CHECK(cd.cdf(j / 100.0) <= j / 100.0 + 1e-14);
  }
}

TEST_CASE("composite convexity report") {
  const auto cert = check_composite_convexity(Copula::independence(3), kAlpha, 0);
  CHECK(cert.holds);
  CHECK_NOTHROW(check_composite_convexity(Copula::gumbel(3, 2.0), kAlpha, 1));
}
