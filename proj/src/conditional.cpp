#include "vcrisk/conditional.hpp"

#include <algorithm>
#include <cmath>

namespace vcrisk {

namespace {

constexpr int kBisectionCap = 200;

Vector with_last(const Vector& head, double v) {
  Vector u(head.size() + 1);
  u.head(head.size()) = head;
  u[head.size()] = v;
  return u;
}

// alpha_S padded with ones outside S, for the inclusion-exclusion over S.
Vector padded_subset(const Vector& alpha, unsigned long mask) {
  Vector out = Vector::Ones(alpha.size());
  for (Index j = 0; j < alpha.size(); ++j) {
    if (mask & (1ul << j)) out[j] = alpha[j];
  }
  return out;
}

int popcount(unsigned long mask) { return __builtin_popcountl(mask); }

}  // namespace

StressLevels::StressLevels(Vector alpha) : alpha_(std::move(alpha)) {
  if (alpha_.size() < 1) throw DomainError("stress levels need at least one component");
  for (Index i = 0; i < alpha_.size(); ++i) {
    if (!(alpha_[i] >= 0.0 && alpha_[i] < 1.0)) {
      throw DomainError("stress level alpha_" + std::to_string(i + 1) + " must lie in [0, 1)");
    }
  }
}

StressLevels::StressLevels(std::initializer_list<double> alpha)
    : StressLevels(Vector(Eigen::Map<const Vector>(alpha.begin(), static_cast<Index>(alpha.size())))) {}

ConditionalDistortion::ConditionalDistortion(Copula copula, StressLevels alpha, StressMode mode,
                                             int index)
    : copula_(std::move(copula)), alpha_(std::move(alpha)), mode_(mode), index_(index) {
  const Index d = alpha_.size();
  if (copula_.dim() != d + 1) {
    throw DomainError("copula dimension " + std::to_string(copula_.dim()) +
                      " does not match " + std::to_string(d) + " stress levels plus the response");
  }
  switch (mode_) {
    case StressMode::AtLeastOne:
      head_ = alpha_.values();
      event_probability_ = 1.0 - copula_(with_last(head_, 1.0));
      break;
    case StressMode::Single:
      if (index_ < 0 || index_ >= d) throw DomainError("single-mode index out of range");
      head_ = Vector::Ones(d);
      head_[index_] = alpha_[index_];
      event_probability_ = 1.0 - alpha_[index_];
      break;
    case StressMode::All: {
      head_ = alpha_.values();
      const Vector reflected = (1.0 - alpha_.values().array()).matrix();
      event_probability_ = copula_.survival(with_last(reflected, 1.0));
      break;
    }
  }
  if (!(event_probability_ > 0.0)) {
    throw DegenerateEventError("conditioning event has probability zero");
  }
}

double ConditionalDistortion::cdf(double v) const {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("conditional cdf argument must lie in [0, 1]");
  double value = 0.0;
  if (mode_ == StressMode::All && copula_.family() == CopulaFamily::Independence) {
    value = v;
  } else if (mode_ == StressMode::All) {
    const Vector reflected = (1.0 - alpha_.values().array()).matrix();
    value = 1.0 - copula_.survival(with_last(reflected, 1.0 - v)) / event_probability_;
  } else {
    value = (v - copula_(with_last(head_, v))) / event_probability_;
  }
  return std::clamp(value, 0.0, 1.0);
}

double ConditionalDistortion::tail(double r) const {
  if (!(r >= 0.0 && r <= 1.0)) throw DomainError("conditional tail argument must lie in [0, 1]");
  if (r == 0.0) return 0.0;
  double value = 0.0;
  if (mode_ == StressMode::All && copula_.family() == CopulaFamily::Independence) {
    // The alternating sum below cancels badly for many high levels; the product form is exact.
    value = r;
  } else if (mode_ == StressMode::All) {
    // P(U > alpha, V > 1-r) = sum_S (-1)^|S| [C_S(alpha_S, 1) - C_S(alpha_S, 1-r)]
    const unsigned long subsets = 1ul << alpha_.size();
    long double total = 0.0L;
    for (unsigned long mask = 0; mask < subsets; ++mask) {
      const double term = copula_.decrement_last(padded_subset(alpha_.values(), mask), r);
      total += (popcount(mask) % 2 == 0) ? term : -static_cast<long double>(term);
    }
    value = static_cast<double>(total) / event_probability_;
  } else {
    value = (r - copula_.decrement_last(head_, r)) / event_probability_;
  }
  return std::clamp(value, 0.0, 1.0);
}

double ConditionalDistortion::density(double v) const {
  if (!(v >= 0.0 && v <= 1.0)) throw DomainError("conditional density argument must lie in [0, 1]");
  if (mode_ == StressMode::All && copula_.family() == CopulaFamily::Independence) return 1.0;
  if (mode_ == StressMode::All) {
    const unsigned long subsets = 1ul << alpha_.size();
    long double total = 0.0L;
    for (unsigned long mask = 0; mask < subsets; ++mask) {
      const double term = copula_.partial_last(with_last(padded_subset(alpha_.values(), mask), v));
      total += (popcount(mask) % 2 == 0) ? term : -static_cast<long double>(term);
    }
    return std::max(0.0, static_cast<double>(total) / event_probability_);
  }
  return std::max(0.0, (1.0 - copula_.partial_last(with_last(head_, v))) / event_probability_);
}

double ConditionalDistortion::inverse_cdf(double beta) const {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("inverse cdf level must lie in (0, 1)");
  if (beta > 0.5) return 1.0 - upper_inverse(1.0 - beta);
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < kBisectionCap; ++it) {
    if (hi - lo <= 1e-15) return hi;
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) >= beta ? hi : lo) = mid;
  }
  throw ConvergenceError("conditional inverse cdf: bisection did not converge");
}

double ConditionalDistortion::upper_inverse(double eps) const {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("upper tail level must lie in (0, 1)");
  // tail() is nondecreasing in r; find sup{r : tail(r) <= eps}.
  double lo = 0.0;
  double hi = 1.0;
  double guess = std::min(1.0, eps * event_probability_);
  int steps = 0;
  if (tail(guess) <= eps) {
    lo = guess;
    for (double r = 2.0 * guess; r < 1.0; r *= 2.0) {
      if (++steps > 2 * kBisectionCap) break;
      if (tail(r) > eps) {
        hi = r;
        break;
      }
      lo = r;
    }
  } else {
    hi = guess;
    for (double r = 0.5 * guess; r > 0.0; r *= 0.5) {
      if (++steps > 8 * kBisectionCap) break;
      if (tail(r) <= eps) {
        lo = r;
        break;
      }
      hi = r;
    }
  }
  for (int it = 0; it < kBisectionCap; ++it) {
    if (hi - lo <= 1e-15 * hi) return lo;
    const double mid = 0.5 * (lo + hi);
    (tail(mid) <= eps ? lo : hi) = mid;
  }
  throw ConvergenceError("conditional upper inverse: bisection did not converge");
}

double tvar_distortion(double t, double beta) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("TVaR distortion argument must lie in [0, 1]");
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("TVaR distortion level must lie in (0, 1)");
  return std::max(0.0, (t - beta) / (1.0 - beta));
}

double l_ratio(const Copula& c1, const Copula& c2, const StressLevels& alpha, double v) {
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("l_ratio argument must lie in (0, 1]");
  const Vector u = with_last(alpha.values(), v);
  const double denominator = v - c2(u);
  if (!(denominator > 0.0)) throw DomainError("l_ratio denominator v - C2(alpha, v) is not positive");
  return (v - c1(u)) / denominator;
}

double s_ratio(const Copula& c, const StressLevels& alpha, int i, double v) {
  if (i < 0 || i >= alpha.size()) throw DomainError("s_ratio index out of range");
  if (!(v > 0.0 && v <= 1.0)) throw DomainError("s_ratio argument must lie in (0, 1]");
  Vector single = Vector::Ones(alpha.size());
  single[i] = alpha[i];
  const double denominator = v - c(with_last(single, v));
  if (!(denominator > 0.0)) throw DomainError("s_ratio denominator v - C(alpha*_i, v) is not positive");
  return (v - c(with_last(alpha.values(), v))) / denominator;
}

namespace {

template <typename Violation>
GridCertificate scan_unit_grid(int grid_n, double tol, Violation&& violation) {
  if (grid_n < 3) throw DomainError("grid needs at least 3 points");
  GridCertificate cert;
  for (int j = 1; j < grid_n; ++j) {
    const double v = static_cast<double>(j) / (grid_n - 1);
    detail::record(cert, violation(v), tol, Vector::Constant(1, v));
  }
  return cert;
}

}  // namespace

GridCertificate check_l_condition(const Copula& c1, const Copula& c2, const StressLevels& alpha,
                                  int grid_n, double tol) {
  const double at_one = l_ratio(c1, c2, alpha, 1.0);
  return scan_unit_grid(grid_n, tol,
                        [&](double v) { return at_one - l_ratio(c1, c2, alpha, v); });
}

GridCertificate check_s_condition(const Copula& c, const StressLevels& alpha, int i, int grid_n,
                                  double tol) {
  const double at_one = s_ratio(c, alpha, i, 1.0);
  return scan_unit_grid(grid_n, tol, [&](double v) { return s_ratio(c, alpha, i, v) - at_one; });
}

GridCertificate check_composite_convexity(const Copula& c, const StressLevels& alpha, int i,
                                          int grid_n, double tol) {
  const ConditionalDistortion any(c, alpha, StressMode::AtLeastOne);
  const ConditionalDistortion single(c, alpha, StressMode::Single, i);
  if (grid_n < 4) throw DomainError("grid needs at least 4 points");
  Vector values(grid_n - 1);
  for (int j = 1; j < grid_n; ++j) {
    values[j - 1] = any.cdf(single.inverse_cdf(static_cast<double>(j) / grid_n));
  }
  GridCertificate cert;
  for (Index j = 1; j + 1 < values.size(); ++j) {
    const double concavity = -(values[j - 1] - 2.0 * values[j] + values[j + 1]);
    detail::record(cert, concavity, tol, Vector::Constant(1, static_cast<double>(j + 1) / grid_n));
  }
  return cert;
}

GridCertificate check_distortion_property(const ConditionalDistortion& cd, int grid_n, double tol) {
  GridCertificate cert;
  detail::record(cert, std::abs(cd.cdf(0.0)), tol, Vector::Constant(1, 0.0));
  detail::record(cert, std::abs(cd.cdf(1.0) - 1.0), tol, Vector::Constant(1, 1.0));
  double previous = cd.cdf(0.0);
  for (int j = 1; j < grid_n; ++j) {
    const double v = static_cast<double>(j) / (grid_n - 1);
    const double value = cd.cdf(v);
    detail::record(cert, previous - value, tol, Vector::Constant(1, v));
    previous = value;
  }
  return cert;
}

}  // namespace vcrisk
