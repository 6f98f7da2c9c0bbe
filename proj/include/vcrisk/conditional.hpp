#pragma once

#include "vcrisk/copula.hpp"

#include <initializer_list>

namespace vcrisk {

/// Confidence levels alpha_1..alpha_d of the stress events X_i > VaR_{alpha_i}(X_i).
class StressLevels {
 public:
  explicit StressLevels(Vector alpha);
  StressLevels(std::initializer_list<double> alpha);

  const Vector& values() const { return alpha_; }
  Index size() const { return alpha_.size(); }
  double operator[](Index i) const { return alpha_[i]; }

 private:
  Vector alpha_;
};

/// Which stress event conditions V.
enum class StressMode {
  AtLeastOne,  ///< some U_i > alpha_i (VCoVaR / VCoES)
  All,         ///< every U_i > alpha_i (MCoVaR / MCoES)
  Single,      ///< U_i > alpha_i for one fixed i (CoVaR baseline)
};

/// Distribution function of V given a stress event on U. It is itself a
/// distortion function, and Y given the event has cdf cdf(F_Y(y)).
class ConditionalDistortion {
 public:
  /// `index` selects the conditioning coordinate (0-based) in Single mode.
  ConditionalDistortion(Copula copula, StressLevels alpha, StressMode mode, int index = 0);

  const Copula& copula() const { return copula_; }
  const StressLevels& alpha() const { return alpha_; }
  StressMode mode() const { return mode_; }
  int index() const { return index_; }

  /// Probability of the conditioning event.
  double event_probability() const { return event_probability_; }

  double cdf(double v) const;
  /// P(V > 1 - r | event), accurate for small r.
  double tail(double r) const;
  double density(double v) const;

  /// Generalized inverse inf{v : cdf(v) >= beta} by bisection.
  double inverse_cdf(double beta) const;
  /// 1 - inverse_cdf(1 - eps), resolved with relative accuracy for small eps.
  double upper_inverse(double eps) const;

 private:
  Copula copula_;
  StressLevels alpha_;
  StressMode mode_;
  int index_;
  Vector head_;  // first dim-1 copula arguments: alpha, or (1,..,alpha_i,..,1)
  double event_probability_;
};

/// Distortion of the TVaR dual, max{0, (t - beta)/(1 - beta)}.
double tvar_distortion(double t, double beta);

/// (v - C1(alpha, v)) / (v - C2(alpha, v)).
double l_ratio(const Copula& c1, const Copula& c2, const StressLevels& alpha, double v);

/// (v - C(alpha, v)) / (v - C(alpha*_i, v)) with alpha*_i = (1,..,alpha_i,..,1); i is 0-based.
double s_ratio(const Copula& c, const StressLevels& alpha, int i, double v);

/// l_ratio(v) >= l_ratio(1) on v = j/(grid_n-1), j = 1..grid_n-1.
GridCertificate check_l_condition(const Copula& c1, const Copula& c2, const StressLevels& alpha,
                                  int grid_n = 101, double tol = 1e-12);

/// s_ratio(v) <= s_ratio(1) on the same grid.
GridCertificate check_s_condition(const Copula& c, const StressLevels& alpha, int i,
                                  int grid_n = 101, double tol = 1e-12);

/// Grid convexity of x -> F_{V|A_U}(F^{-1}_{V|U_i>alpha_i}(x)) on x in (0,1).
GridCertificate check_composite_convexity(const Copula& c, const StressLevels& alpha, int i,
                                          int grid_n = 101, double tol = 1e-9);

/// cdf(0) = 0, cdf(1) = 1 and nondecreasing on v = j/(grid_n-1).
GridCertificate check_distortion_property(const ConditionalDistortion& cd, int grid_n = 101,
                                          double tol = 1e-12);

}  // namespace vcrisk
