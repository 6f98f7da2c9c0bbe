#pragma once

#include "vcrisk/types.hpp"

#include <vector>

namespace vcrisk {

enum class MarginalKind { Pareto, Empirical };

/// Univariate loss distribution: Pareto(a, k) with survival (k/x)^a on (k, inf),
/// or the empirical distribution of a finite sample.
class Marginal {
 public:
  static Marginal pareto(double shape, double scale);
  static Marginal empirical(std::vector<double> samples);

  MarginalKind kind() const { return kind_; }
  double shape() const { return shape_; }
  double scale() const { return scale_; }
  /// Sorted sample (empty for Pareto).
  const std::vector<double>& samples() const { return samples_; }

  double cdf(double x) const;
  double survival(double x) const;

  /// Generalized inverse inf{x : cdf(x) >= t} for t in (0, 1].
  double quantile(double t) const;

  /// quantile(1 - s) evaluated without forming 1 - s, for s in [0, 1].
  double upper_quantile(double s) const;

  double mean() const;
  /// Smallest point of the support.
  double lower_bound() const;
  bool bounded_above() const { return kind_ == MarginalKind::Empirical; }

  std::string name() const;

 private:
  Marginal(MarginalKind kind, double shape, double scale, std::vector<double> samples);

  MarginalKind kind_;
  double shape_ = 0.0;
  double scale_ = 0.0;
  std::vector<double> samples_;
};

inline double value_at_risk(const Marginal& m, double beta) { return m.quantile(beta); }

/// (1/(1-beta)) * integral of quantile(t) over [beta, 1).
/// Pareto: closed form, DivergenceError when a <= 1. Empirical: exact step integral.
double expected_shortfall(const Marginal& m, double beta);

/// Same integral by quadrature of the upper quantile; used to cross-check the closed forms.
double expected_shortfall_quadrature(const Marginal& m, double beta);

}  // namespace vcrisk
