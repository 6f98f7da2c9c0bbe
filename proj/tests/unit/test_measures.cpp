#include "../oracles.hpp"
#include "vcrisk/measures.hpp"

#include <doctest.h>

#include <cmath>

using namespace vcrisk;

namespace {

MeasureRequest gumbel_request(double theta, double a, double k, double beta) {
  return {Copula::gumbel(3, theta), Marginal::pareto(a, k), StressLevels{0.95, 0.95}, beta};
}

}  // namespace

TEST_CASE("frozen oracle values") {
  for (const auto& p : oracle::gumbel2_points) {
    const auto req = gumbel_request(2.0, p.a, p.k, p.beta);
    CHECK(vcovar(req) == doctest::Approx(p.vcovar).epsilon(1e-12));
    CHECK(mcovar(req) == doctest::Approx(p.mcovar).epsilon(1e-12));
    CHECK(covar(req, 0) == doctest::Approx(p.covar).epsilon(1e-12));
    CHECK(covar(req, 1) == doctest::Approx(p.covar).epsilon(1e-12));
    CHECK(vcoes(req) == doctest::Approx(p.vcoes).epsilon(1e-8));
    CHECK(mcoes(req) == doctest::Approx(p.mcoes).epsilon(1e-8));
  }
}

TEST_CASE("request validation") {
  MeasureRequest bad{Copula::gumbel(4, 2.0), Marginal::pareto(3, 1), StressLevels{0.9, 0.9}, 0.9};
  CHECK_THROWS_AS(vcovar(bad), DomainError);
  CHECK_THROWS_AS(vcovar(gumbel_request(2.0, 3, 1, 1.0)), DomainError);
  CHECK_THROWS_AS(vcovar(gumbel_request(2.0, 3, 1, 0.0)), DomainError);
  CHECK_THROWS_AS(vcoes(gumbel_request(2.0, 1.0, 1, 0.5)), DivergenceError);
}

TEST_CASE("independence reduces to VaR and ES") {
  for (double beta : {0.5, 0.9, 0.95, 0.99}) {
    const MeasureRequest req{Copula::independence(3), Marginal::pareto(9, 20), StressLevels{0.9, 0.95}, beta};
    const auto r = contributions(req);
    CHECK(std::abs(r.vcovar - r.var) < 1e-9);
    CHECK(std::abs(r.mcovar - r.var) < 1e-9);
    CHECK(std::abs(r.vcoes - r.es) / r.es < 1e-7);
    CHECK(std::abs(r.mcoes - r.es) / r.es < 1e-7);
    CHECK(std::abs(r.delta_vcovar) < 1e-9);
    CHECK(std::abs(r.delta_r_vcoes) < 1e-7);
    for (double x : r.delta_i_vcovar) CHECK(std::abs(x) < 1e-9);
  }
}

TEST_CASE("report identities") {
  const auto r = contributions(gumbel_request(2.0, 20, 16, 0.95));
  CHECK(r.delta_vcovar == r.vcovar - r.var);
  CHECK(r.delta_r_vcovar == r.delta_vcovar / r.var);
  CHECK(r.delta_vcoes == r.vcoes - r.es);
  CHECK(r.delta_r_vcoes == r.delta_vcoes / r.es);
  REQUIRE(r.covar.size() == 2);
  CHECK(r.delta_i_vcovar[0] == r.vcovar - r.covar[0]);
  CHECK(r.delta_i_r_vcovar[1] == (r.vcovar - r.covar[1]) / r.covar[1]);
}

TEST_CASE("zero baseline ratio is an error") {
  const auto zeros = Marginal::empirical({0.0, 0.0, 0.0, 1.0});
  const MeasureRequest req{Copula::independence(2), zeros, StressLevels{0.5}, 0.5};
  CHECK_THROWS_AS(contributions(req), DomainError);
}

TEST_CASE("d = 1 collapses the three events") {
  for (double theta : {1.5, 2.0, 3.0}) {
    for (double beta : {0.1, 0.5, 0.9, 0.99}) {
      const MeasureRequest req{Copula::gumbel(2, theta), Marginal::pareto(4, 5), StressLevels{0.9}, beta};
      const double c = covar(req, 0);
      CHECK(std::abs(vcovar(req) - c) < 1e-10);
      CHECK(std::abs(mcovar(req) - c) < 1e-10);
    }
  }
}

TEST_CASE("outer and inner ES representations agree") {
  for (double beta : {0.3, 0.9, 0.99}) {
    for (auto mode : {StressMode::AtLeastOne, StressMode::All}) {
      const auto req = gumbel_request(2.0, 9, 20, beta);
      QuadratureSpec tight;
      tight.rel_tol = 1e-10;
      CHECK(conditional_es_inner(req, mode, tight) == doctest::Approx(conditional_es(req, mode, tight)).epsilon(1e-6));
    }
  }
}

TEST_CASE("empirical marginal uses the exact step sums") {
  const auto e = Marginal::empirical({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const MeasureRequest ind{Copula::independence(3), e, StressLevels{0.9, 0.5}, 0.75};
  CHECK(vcovar(ind) == 8.0);
  CHECK(vcoes(ind) == doctest::Approx(expected_shortfall(e, 0.75)).epsilon(1e-13));
  const MeasureRequest g{Copula::gumbel(3, 2.0), e, StressLevels{0.9, 0.5}, 0.75};
  const double v = vcoes(g);
  CHECK(v >= expected_shortfall(e, 0.75));
  CHECK(v <= 10.0);
}

TEST_CASE("monotone in beta and dominating VaR and ES on a grid") {
  double prev[4] = {0, 0, 0, 0};
  for (int j = 1; j < 100; ++j) {
    const auto req = gumbel_request(2.0, 20, 16, j / 100.0);
    const double now[4] = {vcovar(req), mcovar(req), vcoes(req), mcoes(req)};
    for (int m = 0; m < 4; ++m) {
      CHECK(now[m] >= prev[m]);
      prev[m] = now[m];
    }
    CHECK(now[0] >= value_at_risk(req.marginal, req.beta));
    CHECK(now[2] >= expected_shortfall(req.marginal, req.beta));
  }
}

TEST_CASE("single-institution contribution follows the s-condition") {
  // For Gumbel(2) F_{V|A} >= F_{V|U_i > alpha_i} on the grid, so VCoVaR <= CoVaR.
  for (int j = 1; j < 100; j += 7) {
    const auto r = contributions(gumbel_request(2.0, 20, 16, j / 100.0));
    for (double d : r.delta_i_vcovar) CHECK(d <= 1e-12);
  }
}

TEST_CASE("distortion risk measure") {
  const auto p = Marginal::pareto(9, 20);
  CHECK(distortion_risk_measure(p, [](double s) { return s; }) == doctest::Approx(p.mean()).epsilon(1e-10));
  for (double beta : {0.5, 0.95}) {
    const double var = distortion_risk_measure(p, [beta](double s) { return s > 1.0 - beta ? 1.0 : 0.0; });
    CHECK(var == doctest::Approx(value_at_risk(p, beta)).epsilon(1e-6));
    const double es = distortion_risk_measure(p, [beta](double s) { return std::min(1.0, s / (1.0 - beta)); });
    CHECK(es == doctest::Approx(expected_shortfall(p, beta)).epsilon(1e-9));
  }
  // TVaR composed with the conditional distortion reproduces VCoES.
  const auto req = gumbel_request(2.0, 9, 20, 0.95);
  const ConditionalDistortion cd(req.copula, req.alpha, StressMode::AtLeastOne);
  const double composite =
      distortion_risk_measure(p, [&](double s) { return std::min(1.0, cd.tail(s) / (1.0 - req.beta)); });
  CHECK(composite == doctest::Approx(vcoes(req)).epsilon(1e-7));

  const auto e = Marginal::empirical({-2.0, -1.0, 0.5, 3.0});
  CHECK(distortion_risk_measure(e, [](double s) { return s; }) == doctest::Approx(e.mean()).epsilon(1e-14));
  CHECK(distortion_risk_measure(e, [](double s) { return std::min(1.0, s / 0.5); }) ==
        doctest::Approx(expected_shortfall(e, 0.5)).epsilon(1e-14));
  CHECK_THROWS_AS(distortion_risk_measure(Marginal::pareto(0.8, 1.0), [](double s) { return s; }), DivergenceError);
}
