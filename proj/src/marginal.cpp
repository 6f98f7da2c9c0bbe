#include "vcrisk/marginal.hpp"

#include "vcrisk/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace vcrisk {

Marginal::Marginal(MarginalKind kind, double shape, double scale, std::vector<double> samples)
    : kind_(kind), shape_(shape), scale_(scale), samples_(std::move(samples)) {}

Marginal Marginal::pareto(double shape, double scale) {
  if (!(shape > 0.0) || !std::isfinite(shape)) throw DomainError("Pareto shape a must be > 0");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("Pareto scale k must be > 0");
  return Marginal(MarginalKind::Pareto, shape, scale, {});
}

Marginal Marginal::empirical(std::vector<double> samples) {
  if (samples.empty()) throw DomainError("empirical marginal needs at least one sample");
  for (double x : samples) {
    if (!std::isfinite(x)) throw DomainError("empirical marginal sample is not finite");
  }
  std::sort(samples.begin(), samples.end());
  return Marginal(MarginalKind::Empirical, 0.0, 0.0, std::move(samples));
}

std::string Marginal::name() const {
  std::ostringstream os;
  if (kind_ == MarginalKind::Pareto) {
    os << "pareto(a=" << shape_ << ",k=" << scale_ << ")";
  } else {
    os << "empirical(n=" << samples_.size() << ")";
  }
  return os.str();
}

double Marginal::cdf(double x) const {
  if (kind_ == MarginalKind::Pareto) return x <= scale_ ? 0.0 : -std::expm1(shape_ * std::log(scale_ / x));
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double Marginal::survival(double x) const {
  if (kind_ == MarginalKind::Pareto) return x <= scale_ ? 1.0 : std::pow(scale_ / x, shape_);
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(samples_.end() - it) / static_cast<double>(samples_.size());
}

double Marginal::quantile(double t) const {
  if (!(t > 0.0 && t <= 1.0)) throw DomainError("quantile level must lie in (0, 1]");
  if (kind_ == MarginalKind::Pareto) {
    if (t == 1.0) throw InfiniteQuantileError("Pareto quantile at level 1 is infinite");
    return scale_ * std::pow(1.0 - t, -1.0 / shape_);
  }
  const auto n = static_cast<double>(samples_.size());
  auto j = static_cast<std::size_t>(std::clamp(std::ceil(n * t), 1.0, n));
  // ceil(n t) can overshoot by one when n t is an integer perturbed by rounding.
  while (j > 1 && static_cast<double>(j - 1) / n >= t) --j;
  return samples_[j - 1];
}

double Marginal::upper_quantile(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw DomainError("upper tail probability must lie in [0, 1]");
  if (kind_ == MarginalKind::Pareto) {
    if (s == 0.0) throw InfiniteQuantileError("Pareto quantile at level 1 is infinite");
    return scale_ * std::pow(s, -1.0 / shape_);
  }
  const auto n = static_cast<double>(samples_.size());
  double below = std::floor(n * s);
  if ((below + 1.0) / n <= s) below += 1.0;
  const auto j = static_cast<std::size_t>(std::max(1.0, n - below));
  return samples_[j - 1];
}

double Marginal::mean() const {
  if (kind_ == MarginalKind::Pareto) {
    if (shape_ <= 1.0) throw DivergenceError("Pareto mean is infinite for a <= 1");
    return shape_ * scale_ / (shape_ - 1.0);
  }
  return std::accumulate(samples_.begin(), samples_.end(), 0.0) / static_cast<double>(samples_.size());
}

double Marginal::lower_bound() const {
  return kind_ == MarginalKind::Pareto ? scale_ : samples_.front();
}

double expected_shortfall(const Marginal& m, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("ES level must lie in [0, 1)");
  if (m.kind() == MarginalKind::Pareto) {
    const double a = m.shape();
    if (a <= 1.0) throw DivergenceError("Pareto expected shortfall diverges for a <= 1");
    return a / (a - 1.0) * m.scale() * std::pow(1.0 - beta, -1.0 / a);
  }
  // Step quantile: x_(j) on ((j-1)/n, j/n].
  const auto& x = m.samples();
  const auto n = static_cast<double>(x.size());
  double sum = 0.0;
  for (std::size_t j = 1; j <= x.size(); ++j) {
    const double lo = std::max(beta, static_cast<double>(j - 1) / n);
    const double hi = static_cast<double>(j) / n;
    if (hi > lo) sum += x[j - 1] * (hi - lo);
  }
  return sum / (1.0 - beta);
}

double expected_shortfall_quadrature(const Marginal& m, double beta) {
  if (!(beta >= 0.0 && beta < 1.0)) throw DomainError("ES level must lie in [0, 1)");
  if (m.kind() == MarginalKind::Empirical) {
    // Integrate between the jumps of the step quantile at j/n.
    const auto n = static_cast<double>(m.samples().size());
    double total = 0.0;
    for (std::size_t j = 1; j <= m.samples().size(); ++j) {
      const double lo = std::max(beta, (static_cast<double>(j) - 1.0) / n);
      const double hi = static_cast<double>(j) / n;
      if (hi <= lo) continue;
      const double mid = 0.5 * (lo + hi);
      total += integrate_adaptive([&](double) { return m.quantile(mid); }, lo, hi);
    }
    return total / (1.0 - beta);
  }
  // t = 1 - (1-beta) e^{-s} turns the tail integral into an exponentially weighted one.
  const double width = 1.0 - beta;
  QuadratureSpec spec;
  spec.rel_tol = 1e-10;
  return integrate_half_line(
      [&](double s) {
        const double w = std::exp(-s);
        return w == 0.0 ? 0.0 : m.upper_quantile(width * w) * w;
      },
      spec, "expected shortfall");
}

}  // namespace vcrisk
