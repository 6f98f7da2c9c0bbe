#pragma once

#include "vcrisk/conditional.hpp"
#include "vcrisk/marginal.hpp"
#include "vcrisk/quadrature.hpp"

#include <functional>
#include <vector>

namespace vcrisk {

/// Copula of (X_1..X_d, Y), loss distribution of Y, stress levels and confidence level.
struct MeasureRequest {
  Copula copula;
  Marginal marginal;
  StressLevels alpha;
  double beta;

  void validate() const;
  MeasureRequest with_beta(double b) const { return {copula, marginal, alpha, b}; }
};

/// Every measure and contribution at one (alpha, beta).
struct MeasureReport {
  double beta = 0.0;
  double var = 0.0;
  double es = 0.0;
  double vcovar = 0.0;
  double mcovar = 0.0;
  double vcoes = 0.0;
  double mcoes = 0.0;
  double delta_vcovar = 0.0;
  double delta_r_vcovar = 0.0;
  double delta_vcoes = 0.0;
  double delta_r_vcoes = 0.0;
  std::vector<double> covar;  ///< CoVaR_{alpha_i, beta}(Y | X_i), one per conditioning variable
  std::vector<double> delta_i_vcovar;
  std::vector<double> delta_i_r_vcovar;
};

/// F_Y^{-1}(F^{-1}_{V|event}(beta)) for the given conditioning event.
double conditional_var(const MeasureRequest& req, StressMode mode, int index = 0);

/// (1/(1-beta)) * integral over t in [beta, 1) of conditional_var at level t, computed in
/// the outer level variable t = 1 - (1-beta) e^{-s}.
double conditional_es(const MeasureRequest& req, StressMode mode, const QuadratureSpec& quad = {},
                      int index = 0);

/// The same quantity through the inner representation
/// integral of F_Y^{-1}(p) d hbar_TVaR(F_{V|event}(p)), i.e. with the conditional density.
double conditional_es_inner(const MeasureRequest& req, StressMode mode,
                            const QuadratureSpec& quad = {}, int index = 0);

inline double vcovar(const MeasureRequest& req) { return conditional_var(req, StressMode::AtLeastOne); }
inline double mcovar(const MeasureRequest& req) { return conditional_var(req, StressMode::All); }
/// CoVaR_{alpha_i, beta}(Y | X_i), i 0-based.
inline double covar(const MeasureRequest& req, int i) { return conditional_var(req, StressMode::Single, i); }

inline double vcoes(const MeasureRequest& req, const QuadratureSpec& quad = {}) {
  return conditional_es(req, StressMode::AtLeastOne, quad);
}
inline double mcoes(const MeasureRequest& req, const QuadratureSpec& quad = {}) {
  return conditional_es(req, StressMode::All, quad);
}

/// Fills every field of MeasureReport. Ratio measures with a zero baseline raise DomainError.
MeasureReport contributions(const MeasureRequest& req, const QuadratureSpec& quad = {});

/// D_h[Y] = int_0^inf h(S(y)) dy - int_{-inf}^0 (1 - h(S(y))) dy for a distortion h
/// acting on survival probabilities.
double distortion_risk_measure(const Marginal& m, const std::function<double(double)>& h,
                               double rel_tol = 1e-10);

}  // namespace vcrisk
