#include "vcrisk/measures.hpp"

#include <algorithm>
#include <cmath>

namespace vcrisk {

void MeasureRequest::validate() const {
  if (copula.dim() != alpha.size() + 1) {
    throw DomainError("copula dimension must equal the number of stress levels plus one");
  }
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("confidence level beta must lie in (0, 1)");
}

double conditional_var(const MeasureRequest& req, StressMode mode, int index) {
  req.validate();
  const ConditionalDistortion cd(req.copula, req.alpha, mode, index);
  if (req.beta > 0.5) return req.marginal.upper_quantile(cd.upper_inverse(1.0 - req.beta));
  return req.marginal.quantile(cd.inverse_cdf(req.beta));
}

namespace {

// The quantile of an empirical Y is a step function, so both ES representations
// reduce to sum_j x_(j) * |(F(j-1/n), F(j/n)] cut to [beta, 1]| / (1 - beta).
double conditional_es_empirical(const MeasureRequest& req, const ConditionalDistortion& cd) {
  const auto& x = req.marginal.samples();
  const auto n = static_cast<double>(x.size());
  double sum = 0.0;
  double lower = 0.0;
  for (std::size_t j = 1; j <= x.size(); ++j) {
    const double upper = cd.cdf(static_cast<double>(j) / n);
    const double lo = std::max(lower, req.beta);
    if (upper > lo) sum += x[j - 1] * (upper - lo);
    lower = upper;
  }
  return sum / (1.0 - req.beta);
}

}  // namespace

double conditional_es(const MeasureRequest& req, StressMode mode, const QuadratureSpec& quad,
                      int index) {
  req.validate();
  const ConditionalDistortion cd(req.copula, req.alpha, mode, index);
  if (req.marginal.kind() == MarginalKind::Empirical) return conditional_es_empirical(req, cd);
  const double width = 1.0 - req.beta;
  return integrate_half_line(
      [&](double s) {
        const double w = std::exp(-s);
        if (w == 0.0) return 0.0;
        return req.marginal.upper_quantile(cd.upper_inverse(width * w)) * w;
      },
      quad, "conditional expected shortfall");
}

double conditional_es_inner(const MeasureRequest& req, StressMode mode, const QuadratureSpec& quad,
                            int index) {
  req.validate();
  const ConditionalDistortion cd(req.copula, req.alpha, mode, index);
  if (req.marginal.kind() == MarginalKind::Empirical) return conditional_es_empirical(req, cd);
  // p runs over (p_beta, 1) with 1 - p = r_beta e^{-s}; dp = (1 - p) ds.
  const double r_beta =
      req.beta > 0.5 ? cd.upper_inverse(1.0 - req.beta) : 1.0 - cd.inverse_cdf(req.beta);
  const double integral = integrate_half_line(
      [&](double s) {
        const double r = r_beta * std::exp(-s);
        if (r == 0.0) return 0.0;
        return req.marginal.upper_quantile(r) * cd.density(1.0 - r) * r;
      },
      quad, "conditional expected shortfall (inner form)");
  return integral / (1.0 - req.beta);
}

MeasureReport contributions(const MeasureRequest& req, const QuadratureSpec& quad) {
  req.validate();
  MeasureReport out;
  out.beta = req.beta;
  out.var = value_at_risk(req.marginal, req.beta);
  out.es = expected_shortfall(req.marginal, req.beta);
  out.vcovar = vcovar(req);
  out.mcovar = mcovar(req);
  out.vcoes = vcoes(req, quad);
  out.mcoes = mcoes(req, quad);

  if (out.var == 0.0) throw DomainError("ratio contribution undefined: VaR baseline is zero");
  if (out.es == 0.0) throw DomainError("ratio contribution undefined: ES baseline is zero");
  out.delta_vcovar = out.vcovar - out.var;
  out.delta_r_vcovar = out.delta_vcovar / out.var;
  out.delta_vcoes = out.vcoes - out.es;
  out.delta_r_vcoes = out.delta_vcoes / out.es;

  for (int i = 0; i < static_cast<int>(req.alpha.size()); ++i) {
    const double baseline = covar(req, i);
    if (baseline == 0.0) {
      throw DomainError("ratio contribution undefined: CoVaR baseline " + std::to_string(i + 1) +
                        " is zero");
    }
    out.covar.push_back(baseline);
    out.delta_i_vcovar.push_back(out.vcovar - baseline);
    out.delta_i_r_vcovar.push_back((out.vcovar - baseline) / baseline);
  }
  return out;
}

namespace {

double distortion_pareto(const Marginal& m, const std::function<double(double)>& h, double rel_tol) {
  // Support (k, inf): [0, k] contributes k h(1); beyond k substitute y = k e^x.
  const double a = m.shape();
  const double k = m.scale();
  auto integrand = [&](double x) {
    const double level = h(std::exp(-a * x));
    return level == 0.0 ? 0.0 : level * k * std::exp(x);
  };
  double total = k * h(1.0);
  double previous = 0.0;
  int small_run = 0;
  int flat_run = 0;
  for (int panel = 0; panel < 700; ++panel) {
    const double part = integrate_adaptive(integrand, panel, panel + 1.0, 0.0, 1e-3 * rel_tol);
    if (!std::isfinite(part)) throw DivergenceError("distortion risk measure: integrand not finite");
    total += part;
    small_run = (std::abs(part) <= 1e-3 * rel_tol * std::abs(total)) ? small_run + 1 : 0;
    if (small_run >= 2) return total;
    flat_run = (panel >= 40 && part >= 0.999 * previous) ? flat_run + 1 : 0;
    if (flat_run >= 5) throw DivergenceError("distortion risk measure does not converge");
    previous = part;
  }
  throw DivergenceError("distortion risk measure does not converge");
}

double distortion_empirical(const Marginal& m, const std::function<double(double)>& h) {
  const auto& x = m.samples();
  const auto n = static_cast<double>(x.size());
  double total = 0.0;
  // S = (n - j)/n on [x_(j), x_(j+1)), with x_(0) = -inf and x_(n+1) = +inf.
  for (std::size_t j = 0; j <= x.size(); ++j) {
    const double lo = (j == 0) ? -INFINITY : x[j - 1];
    const double hi = (j == x.size()) ? INFINITY : x[j];
    if (!(hi > lo)) continue;
    const double level = h((n - static_cast<double>(j)) / n);
    const double positive = std::max(0.0, hi) - std::max(0.0, lo);
    const double negative = std::min(0.0, hi) - std::min(0.0, lo);
    if (positive > 0.0 && level != 0.0) total += level * positive;
    if (negative > 0.0 && level != 1.0) total -= (1.0 - level) * negative;
  }
  return total;
}

}  // namespace

double distortion_risk_measure(const Marginal& m, const std::function<double(double)>& h,
                               double rel_tol) {
  if (m.kind() == MarginalKind::Pareto) return distortion_pareto(m, h, rel_tol);
  return distortion_empirical(m, h);
}

}  // namespace vcrisk
