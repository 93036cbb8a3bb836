// Gauss-Jacobi quadrature on (0,1) for the weight t^p (1-t)^q.
#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace jbessel {

struct QuadratureRule {
  double p = 0.0;  ///< exponent of t
  double q = 0.0;  ///< exponent of (1 - t)
  std::vector<double> nodes;    ///< strictly increasing, inside (0,1)
  std::vector<double> weights;  ///< positive, sum to B(p+1, q+1)

  std::size_t size() const { return nodes.size(); }
};

/// Golub-Welsch: eigenvalues and first eigenvector components of the Jacobi
/// matrix of the shifted Jacobi polynomials. Exact for polynomials of degree
/// <= 2m-1. Requires p, q > -1 and 1 <= m <= 512.
QuadratureRule gauss_jacobi_rule(double p, double q, std::size_t m);

/// Process-wide memo of gauss_jacobi_rule; safe to call concurrently.
std::shared_ptr<const QuadratureRule> cached_rule(double p, double q, std::size_t m);

/// sum_i w_i g(t_i)
template <class Fn>
double integrate_weighted(const QuadratureRule& rule, Fn&& g) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * g(rule.nodes[i]);
  return s;
}

struct QuadratureEstimate {
  double value = 0.0;     ///< result of the larger rule
  double error = 0.0;     ///< |I_m - I_2m|
  std::size_t nodes = 0;  ///< size of the larger rule
};

/// Integrates with the m- and 2m-point rules, doubling m (up to max_m) until
/// the two agree to rel_tol relative to `scale` (or |I| when scale is 0).
template <class Fn>
QuadratureEstimate integrate_adaptive(double p, double q, Fn&& g, std::size_t m, double rel_tol,
                                      std::size_t max_m = 512, double scale = 0.0) {
  auto coarse = cached_rule(p, q, m);
  double Im = integrate_weighted(*coarse, g);
  for (;;) {
    const std::size_t m2 = 2 * m;
    if (m2 > max_m) return {Im, std::abs(Im), m};
    auto fine = cached_rule(p, q, m2);
    const double I2 = integrate_weighted(*fine, g);
    const double err = std::abs(I2 - Im);
    const double ref = scale > 0.0 ? scale : std::abs(I2);
    if (err <= rel_tol * ref || 2 * m2 > max_m) return {I2, err, m2};
    m = m2;
    Im = I2;
  }
}

}  // namespace jbessel
