#include "../oracles.hpp"
#include "vcrisk/copula.hpp"

#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>

using namespace vcrisk;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Index>(xs.size()));
  Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Bivariate checkerboard copula with mass 1/3 on the cells (0,0), (1,2), (2,1) of a 3x3 grid.
struct Checkerboard {
  int dim() const { return 2; }
  double operator()(const Vector& u) const {
    static constexpr std::array<std::array<double, 3>, 3> mass = {
        {{1.0 / 3, 0, 0}, {0, 0, 1.0 / 3}, {0, 1.0 / 3, 0}}};
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double fu = std::clamp(3.0 * u[0] - i, 0.0, 1.0);
        const double fv = std::clamp(3.0 * u[1] - j, 0.0, 1.0);
        total += mass[i][j] * fu * fv;
      }
    }
    return total;
  }
};

// Clayton with negative parameter, a negatively dependent Archimedean copula.
Copula clayton(double theta) {
  ArchimedeanGenerator g;
  g.psi = [theta](double t) { return (std::pow(t, -theta) - 1.0) / theta; };
  g.psi_inverse = [theta](double s) { return std::pow(std::max(1.0 + theta * s, 0.0), -1.0 / theta); };
  return Copula::archimedean(2, g);
}

}  // namespace

TEST_CASE("evaluation examples") {
  CHECK(Copula::independence(3)(vec({0.95, 0.95, 0.95})) == doctest::Approx(0.857375).epsilon(1e-15));
  CHECK(Copula::gumbel(3, 1.0)(vec({0.3, 0.5, 0.7})) == doctest::Approx(0.105).epsilon(1e-13));
  CHECK(std::abs(Copula::gumbel(3, 2.0)(vec({0.95, 0.95, 0.95})) - oracle::gumbel2_c_095) < 1e-15);
}

TEST_CASE("argument validation") {
  const auto c = Copula::gumbel(3, 2.0);
  CHECK_THROWS_AS(c(vec({0.5, 0.5})), DomainError);
  CHECK_THROWS_AS(c(vec({0.5, 1.5, 0.5})), DomainError);
  CHECK_THROWS_AS(c(vec({-0.1, 0.5, 0.5})), DomainError);
  CHECK_THROWS_AS(Copula::gumbel(3, 0.9), DomainError);
  CHECK_THROWS_AS(Copula::independence(1), DomainError);
}

TEST_CASE("boundary and margin properties") {
  for (const auto& c : {Copula::independence(3), Copula::gumbel(3, 1.5), Copula::gumbel(3, 5.0), clayton(-0.5)}) {
    const int d = c.dim();
    double worst = 0.0;
    for (int k = 0; k < d; ++k) {
      for (int j = 0; j <= 50; ++j) {
        Vector u = Vector::Ones(d);
        u[k] = j / 50.0;
        worst = std::max(worst, std::abs(c(u) - u[k]));
        u[(k + 1) % d] = 0.0;
        CHECK(c(u) == 0.0);
      }
    }
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("Frechet bounds, Lipschitz and theta nesting on a grid") {
  const double thetas[] = {1.0, 1.5, 2.0, 3.0, 5.0};
  const int n = 12;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      for (int l = 0; l <= n; ++l) {
        const Vector u = vec({double(i) / n, double(j) / n, double(l) / n});
        double previous = -1.0;
        for (double th : thetas) {
          const auto c = Copula::gumbel(3, th);
          const double value = c(u);
          CHECK(value >= std::max(u.sum() - 2.0, 0.0) - 1e-15);
          CHECK(value <= u.minCoeff() + 1e-15);
          CHECK(value >= previous - 1e-14);
          previous = value;
          Vector shifted = u;
          shifted[2] = std::min(1.0, u[2] + 0.5 / n);
          CHECK(c(shifted) - value <= shifted[2] - u[2] + 1e-14);
          CHECK(c(shifted) >= value - 1e-15);
        }
      }
    }
  }
}

TEST_CASE("Gumbel with theta 1 matches independence") {
  const auto g = Copula::gumbel(4, 1.0);
  const auto ind = Copula::independence(4);
  double worst = 0.0;
  detail::for_each_lattice_point(4, 9, [&](const Vector& u) { worst = std::max(worst, std::abs(g(u) - ind(u))); });
  CHECK(worst < 1e-12);
}

TEST_CASE("log-space evaluation near zero") {
  const auto c = Copula::gumbel(3, 20.0);
  const double v = c(vec({1e-300, 0.5, 0.5}));
  CHECK(std::isfinite(v));
  CHECK(v >= 0.0);
  CHECK(v <= 1e-300 * (1 + 1e-12));
}

TEST_CASE("survival copula") {
  CHECK(Copula::independence(2).survival(vec({0.1, 0.1})) == doctest::Approx(0.01).epsilon(1e-14));
  const auto g = Copula::gumbel(2, 2.0);
  for (double a : {0.05, 0.3, 0.7}) {
    for (double b : {0.1, 0.5, 0.95}) {
      CHECK(g.survival(vec({a, b})) == doctest::Approx(a + b - 1.0 + g(vec({1 - a, 1 - b}))).epsilon(1e-13));
    }
  }
  CHECK(g.survival(vec({0.0, 0.4})) == 0.0);
  CHECK(Copula::gumbel(3, 2.0).survival(vec({0.3, 0.0, 0.5})) == 0.0);
  const auto g3 = Copula::gumbel(3, 2.0);
  const double c1 = 0.95;
  const double c2 = g3(vec({0.95, 0.95, 1.0}));
  const double expected = 1.0 - 3 * c1 + 3 * c2 - oracle::gumbel2_c_095;
  CHECK(g3.survival(vec({0.05, 0.05, 0.05})) == doctest::Approx(expected).epsilon(1e-12));
  CHECK_THROWS_AS(Copula::gumbel(21, 2.0).survival(Vector::Constant(21, 0.5)), UnsupportedError);
  CHECK_NOTHROW(Copula::gumbel(20, 2.0).survival(Vector::Constant(20, 0.5)));
}

TEST_CASE("partial derivative and decrement in the last argument") {
  const auto g = Copula::gumbel(3, 2.0);
  const Vector head = vec({0.95, 0.9});
  for (double v : {0.2, 0.6, 0.99}) {
    const double h = 1e-6;
    Vector lo(3), hi(3), at(3);
    lo << head, v - h;
    hi << head, v + h;
    at << head, v;
    CHECK(g.partial_last(at) == doctest::Approx((g(hi) - g(lo)) / (2 * h)).epsilon(1e-7));
  }
  Vector one(3), below(3);
  one << head, 1.0;
  below << head, 1.0 - 1e-3;
  CHECK(g.decrement_last(head, 1e-3) == doctest::Approx(g(one) - g(below)).epsilon(1e-9));
  // Small decrements stay accurate where the direct difference cancels.
  const double r = 1e-14;
  CHECK(g.decrement_last(head, r) > 0.0);
  CHECK(g.decrement_last(head, r) / r == doctest::Approx(g.decrement_last(head, 1e-10) / 1e-10).epsilon(1e-5));
}

TEST_CASE("LTD certification") {
  CHECK(is_ltd_last(Copula::independence(3)));
  CHECK(is_ltd_last(Copula::gumbel(3, 2.0)));
  CHECK(is_ltd_last(Copula::gumbel(2, 3.0)));
  const auto cert = check_ltd_last(Checkerboard{});
  CHECK_FALSE(cert.holds);
  CHECK(cert.max_violation > 0.01);
  // Along u = 22/32 the ratio C/v falls until v = 2/3 and rises afterwards.
  const Checkerboard cb;
  const double u = 22.0 / 32;
  CHECK(cb(vec({u, 1.0 / 3})) / (1.0 / 3) > cb(vec({u, 2.0 / 3})) / (2.0 / 3));
  CHECK(cb(vec({u, 1.0})) > cb(vec({u, 2.0 / 3})) / (2.0 / 3));
  CHECK_FALSE(is_ltd_last(clayton(-0.5)));
  CHECK_THROWS_AS(check_ltd_last(Copula::gumbel(2, 2.0), 7), DomainError);
}

TEST_CASE("componentwise concavity") {
  CHECK(is_componentwise_concave_last(Copula::independence(3)));
  CHECK(is_componentwise_concave_last(Copula::gumbel(3, 2.0), 64));
  CHECK(is_componentwise_concave_last(Copula::gumbel(3, 1.0)));
  CHECK_FALSE(is_componentwise_concave_last(clayton(-0.5)));
  CHECK_THROWS_AS(check_concave_last(Copula::gumbel(2, 2.0), 4), DomainError);
}
