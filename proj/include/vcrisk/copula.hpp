#pragma once

#include "vcrisk/types.hpp"

#include <functional>
#include <memory>
#include <string>

namespace vcrisk {

enum class CopulaFamily { Independence, Gumbel, ArchimedeanGeneric };

/// Generator of an Archimedean copula, C(u) = psi_inverse(sum_i psi(u_i)).
///
/// psi must be strictly decreasing on (0,1] with psi(1) = 0; psi_inverse maps
/// [0, inf] back to [0, 1]. The derivative is optional and only used by
/// partial_last(); a central difference is taken when it is empty.
struct ArchimedeanGenerator {
  std::function<double(double)> psi;
  std::function<double(double)> psi_inverse;
  std::function<double(double)> psi_derivative;
};

/// Hard cap on the dimension accepted by the inclusion-exclusion survival evaluation.
inline constexpr int kMaxSurvivalDim = 20;

/// A (d+1)-dimensional copula. The last coordinate is the response V, the
/// leading d coordinates are the conditioning variables U_1..U_d.
///
/// Immutable after construction; all member functions are const and safe to
/// call concurrently.
class Copula {
 public:
  static Copula independence(int dim);
  static Copula gumbel(int dim, double theta);
  static Copula archimedean(int dim, ArchimedeanGenerator generator);

  int dim() const { return dim_; }
  CopulaFamily family() const { return family_; }
  /// Gumbel parameter; 1 for the independence copula, NaN for generic generators.
  double theta() const { return theta_; }
  const ArchimedeanGenerator* generator() const { return generator_.get(); }
  std::string name() const;

  /// C(u). Throws DomainError on dimension mismatch or components outside [0,1].
  double operator()(const Eigen::Ref<const Vector>& u) const;

  /// Survival copula by inclusion-exclusion over all lower-dimensional margins,
  /// each margin obtained by padding the unused arguments with 1.
  double survival(const Eigen::Ref<const Vector>& u) const;

  /// Partial derivative of C with respect to the last argument.
  double partial_last(const Eigen::Ref<const Vector>& u) const;

  /// C(head, 1) - C(head, 1 - r), accurate for r close to 0.
  /// `head` holds the first dim-1 arguments.
  double decrement_last(const Eigen::Ref<const Vector>& head, double r) const;

 private:
  Copula(CopulaFamily family, int dim, double theta,
         std::shared_ptr<const ArchimedeanGenerator> generator);

  void validate(const Eigen::Ref<const Vector>& u) const;
  double eval_unchecked(const Eigen::Ref<const Vector>& u) const;
  double survival_inclusion_exclusion(const Eigen::Ref<const Vector>& u) const;

  CopulaFamily family_;
  int dim_;
  double theta_;
  std::shared_ptr<const ArchimedeanGenerator> generator_;
};

inline double eval(const Copula& c, const Eigen::Ref<const Vector>& u) { return c(u); }

inline double eval_survival(const Copula& c, const Eigen::Ref<const Vector>& u) {
  return c.survival(u);
}

/// Result of a lattice certification. `witness` holds the lattice point with the
/// largest violation (empty when none was found).
struct GridCertificate {
  bool holds = true;
  double max_violation = 0.0;
  Vector witness;
};

namespace detail {

// Calls fn(profile) for every point of {1/n, 2/n, ..., 1}^k.
template <typename Fn>
void for_each_lattice_point(int k, int n, Fn&& fn) {
  Eigen::VectorXi counter = Eigen::VectorXi::Ones(k);
  Vector point(k);
  while (true) {
    for (int i = 0; i < k; ++i) point[i] = static_cast<double>(counter[i]) / n;
    fn(point);
    int pos = 0;
    while (pos < k && counter[pos] == n) counter[pos++] = 1;
    if (pos == k) return;
    ++counter[pos];
  }
}

inline void record(GridCertificate& cert, double violation, double tol, const Vector& at) {
  if (violation > cert.max_violation) {
    cert.max_violation = violation;
    if (violation > tol) {
      cert.holds = false;
      cert.witness = at;
    }
  }
}

}  // namespace detail

/// Certifies on a grid_n^dim lattice that C(u)/u_dim is nonincreasing in u_dim
/// for every profile of the other coordinates (sufficient condition for LTD in
/// the last coordinate). Works with any type exposing dim() and operator()(Vector).
template <typename CopulaLike>
GridCertificate check_ltd_last(const CopulaLike& c, int grid_n = 32, double tol = 1e-12) {
  if (grid_n < 8) throw DomainError("check_ltd_last: grid_n must be at least 8");
  const int d = c.dim() - 1;
  GridCertificate cert;
  Vector u(c.dim());
  detail::for_each_lattice_point(d, grid_n, [&](const Vector& head) {
    u.head(d) = head;
    double previous = 0.0;
    for (int j = 1; j <= grid_n; ++j) {
      u[d] = static_cast<double>(j) / grid_n;
      const double ratio = c(u) / u[d];
      if (j > 1) detail::record(cert, ratio - previous, tol, u);
      previous = ratio;
    }
  });
  return cert;
}

template <typename CopulaLike>
bool is_ltd_last(const CopulaLike& c, int grid_n = 32) {
  return check_ltd_last(c, grid_n).holds;
}

/// Certifies that second differences of C in its last argument are <= tol on the lattice.
template <typename CopulaLike>
GridCertificate check_concave_last(const CopulaLike& c, int grid_n = 32, double tol = 1e-12) {
  if (grid_n < 8) throw DomainError("check_concave_last: grid_n must be at least 8");
  const int d = c.dim() - 1;
  GridCertificate cert;
  Vector u(c.dim());
  Vector column(grid_n + 1);
  detail::for_each_lattice_point(d, grid_n, [&](const Vector& head) {
    u.head(d) = head;
    for (int j = 0; j <= grid_n; ++j) {
      u[d] = static_cast<double>(j) / grid_n;
      column[j] = c(u);
    }
    for (int j = 1; j < grid_n; ++j) {
      const double second = column[j - 1] - 2.0 * column[j] + column[j + 1];
      if (second > cert.max_violation) {
        u[d] = static_cast<double>(j) / grid_n;
        detail::record(cert, second, tol, u);
      }
    }
  });
  return cert;
}

template <typename CopulaLike>
bool is_componentwise_concave_last(const CopulaLike& c, int grid_n = 32) {
  return check_concave_last(c, grid_n).holds;
}

}  // namespace vcrisk
