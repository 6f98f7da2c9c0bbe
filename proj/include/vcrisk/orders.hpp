#pragma once

#include "vcrisk/marginal.hpp"

#include <optional>
#include <string>

namespace vcrisk {

enum class StochasticOrder { st, icx, disp, star, eps };

std::string to_string(StochasticOrder order);
/// Parses "st", "icx", "disp", "star" or "eps"; throws DomainError otherwise.
StochasticOrder parse_order(const std::string& name);

/// Point where the defining inequality of the order fails. `v` is only used by
/// the two-level dispersive comparison.
struct OrderWitness {
  double u = 0.0;
  std::optional<double> v;
  double magnitude = 0.0;
};

struct OrderVerdict {
  StochasticOrder order = StochasticOrder::st;
  bool holds = false;
  double max_violation = 0.0;
  std::optional<OrderWitness> witness;  ///< present whenever holds is false
  bool vacuous = false;                 ///< no grid level where the order is defined
};

/// Closed-form parameter conditions for Y1 ~ Pareto(a1, k1) against Y2 ~ Pareto(a2, k2).
OrderVerdict pareto_order(StochasticOrder order, const Marginal& first, const Marginal& second);

/// Decides the order from its definition on grids of grid_n levels. "holds" means no
/// violation beyond 1e-9 relative to the magnitude of the compared quantities.
OrderVerdict numeric_order(StochasticOrder order, const Marginal& first, const Marginal& second,
                           int grid_n = 200);

/// E[(Y - x)_+] by quadrature of the quantile function.
double stop_loss(const Marginal& m, double x);

/// E[((Y - VaR_p) / VaR_p)_+]; DomainError when VaR_p = 0.
double expected_proportional_shortfall(const Marginal& m, double p);

}  // namespace vcrisk
