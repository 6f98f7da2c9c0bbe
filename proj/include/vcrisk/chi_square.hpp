#pragma once

namespace vcrisk {

/// Regularized lower incomplete gamma P(a, x) for a > 0, x >= 0.
/// Series expansion for x < a + 1, Lentz continued fraction for Q otherwise.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), without cancellation.
double regularized_gamma_q(double a, double x);

/// Chi-square distribution with (possibly fractional) degrees of freedom.
inline double chi_square_cdf(double x, double dof) { return regularized_gamma_p(0.5 * dof, 0.5 * x); }
inline double chi_square_sf(double x, double dof) { return regularized_gamma_q(0.5 * dof, 0.5 * x); }

}  // namespace vcrisk
