#include "vcrisk/copula.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vcrisk {

namespace {

// Largest -log(u_i); returns -1 when some component is 0 (copula vanishes).
double max_neg_log(const Eigen::Ref<const Vector>& u) {
  double m = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    if (u[i] <= 0.0) return -1.0;
    m = std::max(m, -std::log(u[i]));
  }
  return m;
}

// sum_i (t_i / m)^theta for t_i = -log(u_i).
double scaled_generator_sum(const Eigen::Ref<const Vector>& u, double m, double theta) {
  double s = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    const double t = -std::log(u[i]);
    if (t > 0.0) s += std::pow(t / m, theta);
  }
  return s;
}

}  // namespace

Copula::Copula(CopulaFamily family, int dim, double theta,
               std::shared_ptr<const ArchimedeanGenerator> generator)
    : family_(family), dim_(dim), theta_(theta), generator_(std::move(generator)) {
  if (dim_ < 2) throw DomainError("copula dimension must be at least 2");
}

Copula Copula::independence(int dim) {
  return Copula(CopulaFamily::Independence, dim, 1.0, nullptr);
}

Copula Copula::gumbel(int dim, double theta) {
  if (!(theta >= 1.0) || !std::isfinite(theta)) {
    throw DomainError("Gumbel parameter theta must be a finite value >= 1");
  }
  return Copula(CopulaFamily::Gumbel, dim, theta, nullptr);
}

Copula Copula::archimedean(int dim, ArchimedeanGenerator generator) {
  if (!generator.psi || !generator.psi_inverse) {
    throw DomainError("Archimedean generator needs both psi and psi_inverse");
  }
  return Copula(CopulaFamily::ArchimedeanGeneric, dim, std::nan(""),
                std::make_shared<const ArchimedeanGenerator>(std::move(generator)));
}

std::string Copula::name() const {
  std::ostringstream os;
  switch (family_) {
    case CopulaFamily::Independence:
      os << "independence";
      break;
    case CopulaFamily::Gumbel:
      os << "gumbel(theta=" << theta_ << ")";
      break;
    case CopulaFamily::ArchimedeanGeneric:
      os << "archimedean";
      break;
  }
  os << "[dim=" << dim_ << "]";
  return os.str();
}

void Copula::validate(const Eigen::Ref<const Vector>& u) const {
  if (u.size() != dim_) {
    throw DomainError("copula argument has length " + std::to_string(u.size()) + ", expected " +
                      std::to_string(dim_));
  }
  for (Index i = 0; i < u.size(); ++i) {
    if (!(u[i] >= 0.0 && u[i] <= 1.0)) {
      throw DomainError("copula argument component " + std::to_string(i) + " outside [0,1]");
    }
  }
}

double Copula::operator()(const Eigen::Ref<const Vector>& u) const {
  validate(u);
  return eval_unchecked(u);
}

double Copula::eval_unchecked(const Eigen::Ref<const Vector>& u) const {
  switch (family_) {
    case CopulaFamily::Independence:
      return u.prod();
    case CopulaFamily::Gumbel: {
      // exp(-(sum t_i^theta)^(1/theta)) with the largest t factored out so that
      // t^theta cannot overflow for tiny u and large theta.
      const double m = max_neg_log(u);
      if (m < 0.0) return 0.0;
      if (m == 0.0) return 1.0;
      const double s = scaled_generator_sum(u, m, theta_);
      return std::exp(-m * std::pow(s, 1.0 / theta_));
    }
    case CopulaFamily::ArchimedeanGeneric: {
      double s = 0.0;
      for (Index i = 0; i < u.size(); ++i) {
        if (u[i] <= 0.0) return 0.0;
        s += generator_->psi(u[i]);
      }
      return std::clamp(generator_->psi_inverse(s), 0.0, 1.0);
    }
  }
  return 0.0;
}

double Copula::survival(const Eigen::Ref<const Vector>& u) const {
  validate(u);
  if (dim_ > kMaxSurvivalDim) {
    throw UnsupportedError("survival copula evaluation supports dim <= " +
                           std::to_string(kMaxSurvivalDim) + ", got " + std::to_string(dim_));
  }
  if ((u.array() == 0.0).any()) return 0.0;
  if (family_ == CopulaFamily::Independence) return u.prod();
  return survival_inclusion_exclusion(u);
}

double Copula::survival_inclusion_exclusion(const Eigen::Ref<const Vector>& u) const {
  const unsigned long subsets = 1ul << dim_;
  Vector padded(dim_);
  long double total = 0.0L;
  for (unsigned long mask = 0; mask < subsets; ++mask) {
    int size = 0;
    for (int j = 0; j < dim_; ++j) {
      if (mask & (1ul << j)) {
        padded[j] = 1.0 - u[j];
        ++size;
      } else {
        padded[j] = 1.0;
      }
    }
    const double term = (mask == 0) ? 1.0 : eval_unchecked(padded);
    total += (size % 2 == 0) ? term : -static_cast<long double>(term);
  }
  return std::clamp(static_cast<double>(total), 0.0, 1.0);
}

double Copula::partial_last(const Eigen::Ref<const Vector>& u) const {
  validate(u);
  const int last = dim_ - 1;
  switch (family_) {
    case CopulaFamily::Independence:
      return u.head(last).prod();
    case CopulaFamily::Gumbel: {
      if ((u.head(last).array() == 0.0).any()) return 0.0;
      if (u[last] == 0.0) {
        return (u.head(last).array() == 1.0).all() ? 1.0 : (theta_ > 1.0 ? 0.0 : u.head(last).prod());
      }
      const double m = max_neg_log(u);
      if (m == 0.0) return 1.0;
      const double scale = m * std::pow(scaled_generator_sum(u, m, theta_), 1.0 / theta_);
      const double c = std::exp(-scale);
      const double t_last = -std::log(u[last]);
      return c * std::pow(t_last / scale, theta_ - 1.0) / u[last];
    }
    case CopulaFamily::ArchimedeanGeneric: {
      const double c = eval_unchecked(u);
      if (generator_->psi_derivative && c > 0.0 && u[last] > 0.0) {
        return generator_->psi_derivative(u[last]) / generator_->psi_derivative(c);
      }
      const double h = 1e-6;
      Vector lo = u, hi = u;
      lo[last] = std::max(0.0, u[last] - h);
      hi[last] = std::min(1.0, u[last] + h);
      return (eval_unchecked(hi) - eval_unchecked(lo)) / (hi[last] - lo[last]);
    }
  }
  return 0.0;
}

double Copula::decrement_last(const Eigen::Ref<const Vector>& head, double r) const {
  if (head.size() != dim_ - 1) throw DomainError("decrement_last: head has wrong length");
  Vector u(dim_);
  u.head(dim_ - 1) = head;
  u[dim_ - 1] = 1.0;
  validate(u);
  if (!(r > 0.0)) return 0.0;
  if (r >= 1.0) return eval_unchecked(u);

  switch (family_) {
    case CopulaFamily::Independence:
      return head.prod() * r;
    case CopulaFamily::Gumbel: {
      const double t_last = -std::log1p(-r);
      double m = max_neg_log(head);
      if (m < 0.0) return 0.0;
      if (m == 0.0) return r;
      m = std::max(m, t_last);
      const double s = scaled_generator_sum(head, m, theta_);
      const double rho = std::pow(t_last / m, theta_);
      const double a = m * std::pow(s, 1.0 / theta_);
      const double delta = a * std::expm1(std::log1p(rho / s) / theta_);
      return std::exp(-a) * -std::expm1(-delta);
    }
    case CopulaFamily::ArchimedeanGeneric: {
      const double top = eval_unchecked(u);
      u[dim_ - 1] = 1.0 - r;
      return top - eval_unchecked(u);
    }
  }
  return 0.0;
}

}  // namespace vcrisk
