#pragma once

#include "vcrisk/types.hpp"

#include <array>
#include <cmath>
#include <string>

namespace vcrisk {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  Vector nodes;
  Vector weights;
};

/// n-point rule from the eigen-decomposition of the Jacobi matrix (Golub-Welsch).
/// Rules are cached; the returned reference stays valid for the program lifetime.
const GaussLegendreRule& gauss_legendre(int n);

template <typename F>
double integrate_gauss_legendre(F&& f, double a, double b, const GaussLegendreRule& rule) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (Index i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * sum;
}

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// 7-point Gauss weights at Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
double adaptive_gk15(F& f, double a, double b, double abs_tol, double rel_tol, int depth) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  const double fc = f(mid);
  double kronrod = kKronrodWeights[7] * fc;
  double gauss = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(mid - dx) + f(mid + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  const double err = std::abs(kronrod - gauss);
  if (err <= std::max(abs_tol, rel_tol * std::abs(kronrod)) || depth <= 0) return kronrod;
  return adaptive_gk15(f, a, mid, 0.5 * abs_tol, rel_tol, depth - 1) +
         adaptive_gk15(f, mid, b, 0.5 * abs_tol, rel_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod (7/15) on [a, b] with bisection down to max_depth levels.
template <typename F>
double integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-12,
                          double rel_tol = 1e-12, int max_depth = 48) {
  if (a == b) return 0.0;
  return detail::adaptive_gk15(f, a, b, abs_tol, rel_tol, max_depth);
}

/// Settings for integrals over [0, inf) computed panel by panel.
struct QuadratureSpec {
  int points = 20;           ///< Gauss-Legendre points per panel
  double panel_width = 1.0;  ///< panel width in the integration variable
  double rel_tol = 1e-7;     ///< requested relative accuracy of the final value
  int max_panels = 750;      ///< panels before the integral is declared divergent
};

/// Integral of f over [0, inf) with consecutive Gauss-Legendre panels. Intended
/// for integrands that decay exponentially after an exp-substitution of a
/// heavy-tailed quantile. Panels stop once two consecutive contributions are
/// below tol_factor * rel_tol of the running total; a non-decaying tail raises
/// DivergenceError.
template <typename F>
double integrate_half_line(F&& f, const QuadratureSpec& spec, const std::string& what) {
  const auto& rule = gauss_legendre(spec.points);
  // Stopping threshold is well below the requested accuracy since the skipped
  // tail is a geometric series of the last contributions.
  const double stop = 1e-6 * spec.rel_tol;
  double total = 0.0;
  double previous = 0.0;
  int small_run = 0;
  int flat_run = 0;
  for (int k = 0; k < spec.max_panels; ++k) {
    const double a = k * spec.panel_width;
    const double part = integrate_gauss_legendre(f, a, a + spec.panel_width, rule);
    if (!std::isfinite(part)) throw DivergenceError(what + ": integrand is not finite");
    total += part;
    if (!std::isfinite(total)) throw DivergenceError(what + ": partial sums overflow");
    small_run = (std::abs(part) <= stop * std::abs(total)) ? small_run + 1 : 0;
    if (small_run >= 2) return total;
    flat_run = (k >= 40 && std::abs(part) >= 0.999 * std::abs(previous)) ? flat_run + 1 : 0;
    if (flat_run >= 5) throw DivergenceError(what + ": integral does not converge");
    previous = part;
  }
  throw DivergenceError(what + ": no convergence within " + std::to_string(spec.max_panels) +
                        " panels");
}

}  // namespace vcrisk
