#include "vcrisk/orders.hpp"

#include "vcrisk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace vcrisk {

namespace {

constexpr double kOrderTol = 1e-9;

std::vector<double> probability_grid(int grid_n) {
  std::vector<double> levels;
  levels.reserve(grid_n + 6);
  for (int j = 1; j <= grid_n; ++j) levels.push_back(static_cast<double>(j) / (grid_n + 1));
  for (int e = 3; e <= 8; ++e) levels.push_back(1.0 - std::pow(10.0, -e));
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  return levels;
}

void note_violation(OrderVerdict& verdict, double violation, double scale, double u,
                    std::optional<double> v = std::nullopt) {
  const double relative = violation / std::max(1.0, std::abs(scale));
  if (relative > verdict.max_violation) {
    verdict.max_violation = relative;
    if (relative > kOrderTol) verdict.witness = OrderWitness{u, v, violation};
  }
}

OrderVerdict finish(OrderVerdict verdict) {
  verdict.holds = !verdict.witness.has_value();
  return verdict;
}

}  // namespace

std::string to_string(StochasticOrder order) {
  switch (order) {
    case StochasticOrder::st: return "st";
    case StochasticOrder::icx: return "icx";
    case StochasticOrder::disp: return "disp";
    case StochasticOrder::star: return "star";
    case StochasticOrder::eps: return "eps";
  }
  return "?";
}

StochasticOrder parse_order(const std::string& name) {
  for (auto order : {StochasticOrder::st, StochasticOrder::icx, StochasticOrder::disp,
                     StochasticOrder::star, StochasticOrder::eps}) {
    if (to_string(order) == name) return order;
  }
  throw DomainError("unknown stochastic order '" + name + "' (expected st, icx, disp, star or eps)");
}

double stop_loss(const Marginal& m, double x) {
  if (m.kind() == MarginalKind::Empirical) {
    double sum = 0.0;
    for (double y : m.samples()) sum += std::max(0.0, y - x);
    return sum / static_cast<double>(m.samples().size());
  }
  // E[(Y - x)_+] = int_{F(x)}^1 (q(p) - x) dp with 1 - p = S(x) e^{-s}.
  const double tail = m.survival(x);
  if (tail == 0.0) return 0.0;
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  return tail * integrate_half_line(
                    [&](double s) {
                      const double w = std::exp(-s);
                      return w == 0.0 ? 0.0 : (m.upper_quantile(tail * w) - x) * w;
                    },
                    spec, "stop-loss transform");
}

double expected_proportional_shortfall(const Marginal& m, double p) {
  const double var = m.quantile(p);
  if (var == 0.0) throw DomainError("expected proportional shortfall undefined where VaR is zero");
  return stop_loss(m, var) / var;
}

OrderVerdict pareto_order(StochasticOrder order, const Marginal& first, const Marginal& second) {
  if (first.kind() != MarginalKind::Pareto || second.kind() != MarginalKind::Pareto) {
    throw DomainError("pareto_order needs two Pareto marginals");
  }
  const double a1 = first.shape(), k1 = first.scale();
  const double a2 = second.shape(), k2 = second.scale();
  bool holds = false;
  switch (order) {
    case StochasticOrder::st:
      holds = a1 >= a2 && k1 <= k2;
      break;
    case StochasticOrder::icx:
      // a1(a2-1) / (a2(a1-1)) <= k2/k1 is E[Y1] <= E[Y2]; together with a1 >= a2 the
      // survival functions cross at most once.
      holds = a1 > 1.0 && a2 > 1.0 && a1 >= a2 &&
              a1 * (a2 - 1.0) * k1 <= a2 * (a1 - 1.0) * k2 * (1.0 + 1e-12);
      break;
    case StochasticOrder::disp:
      holds = a1 >= a2 && a1 * k2 >= a2 * k1;
      break;
    case StochasticOrder::star:
    case StochasticOrder::eps:
      holds = a1 >= a2;
      break;
  }
  OrderVerdict verdict;
  verdict.order = order;
  verdict.holds = holds;
  if (!holds) {
    OrderVerdict numeric;
    try {
      numeric = numeric_order(order, first, second);
    } catch (const DivergenceError&) {
      numeric.witness = OrderWitness{0.0, std::nullopt, std::numeric_limits<double>::infinity()};
    }
    verdict.witness = numeric.witness.value_or(OrderWitness{});
    verdict.max_violation = numeric.max_violation;
  }
  return verdict;
}

OrderVerdict numeric_order(StochasticOrder order, const Marginal& first, const Marginal& second,
                           int grid_n) {
  if (grid_n < 16) throw DomainError("numeric_order needs grid_n >= 16");
  const auto levels = probability_grid(grid_n);
  OrderVerdict verdict;
  verdict.order = order;

  std::vector<double> q1, q2;
  for (double p : levels) {
    q1.push_back(first.quantile(p));
    q2.push_back(second.quantile(p));
  }

  // Abscissae for st / icx: quantiles of both plus every jump of an empirical cdf.
  auto abscissae = [&]() {
    std::vector<double> xs(q1);
    xs.insert(xs.end(), q2.begin(), q2.end());
    for (const auto* m : {&first, &second}) xs.insert(xs.end(), m->samples().begin(), m->samples().end());
    xs.push_back(std::min(first.lower_bound(), second.lower_bound()) - 1.0);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
  };

  switch (order) {
    case StochasticOrder::st:
      for (double x : abscissae()) note_violation(verdict, first.survival(x) - second.survival(x), 1.0, x);
      break;
    case StochasticOrder::icx:
      for (double x : abscissae()) {
        const double pi1 = stop_loss(first, x);
        const double pi2 = stop_loss(second, x);
        note_violation(verdict, pi1 - pi2, std::max(pi1, pi2), x);
      }
      break;
    case StochasticOrder::disp:
      for (std::size_t i = 0; i < levels.size(); ++i) {
        for (std::size_t j = i + 1; j < levels.size(); ++j) {
          const double spread1 = q1[j] - q1[i];
          const double spread2 = q2[j] - q2[i];
          note_violation(verdict, spread1 - spread2, std::max(std::abs(spread1), std::abs(spread2)),
                         levels[i], levels[j]);
        }
      }
      break;
    case StochasticOrder::star: {
      double previous = std::numeric_limits<double>::quiet_NaN();
      for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(q1[i] > 0.0)) continue;
        const double ratio = q2[i] / q1[i];
        if (!std::isnan(previous)) note_violation(verdict, previous - ratio, ratio, levels[i]);
        previous = ratio;
      }
      break;
    }
    case StochasticOrder::eps: {
      bool any = false;
      for (std::size_t i = 0; i < levels.size(); ++i) {
        if (q1[i] == 0.0 || q2[i] == 0.0) continue;
        any = true;
        const double e1 = stop_loss(first, q1[i]) / q1[i];
        const double e2 = stop_loss(second, q2[i]) / q2[i];
        note_violation(verdict, e1 - e2, std::max(std::abs(e1), std::abs(e2)), levels[i]);
      }
      verdict.vacuous = !any;
      break;
    }
  }
  return finish(verdict);
}

}  // namespace vcrisk
