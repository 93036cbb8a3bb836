#include "jbessel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "jbessel/core_math.hpp"

namespace jbessel {

namespace {

// Implicit QL on a symmetric tridiagonal matrix (diagonal d, off-diagonal e,
// e[i] couples i and i+1), carrying only the first row of the eigenvector
// matrix in z. On return d holds eigenvalues in ascending order.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const std::size_t n = d.size();
  if (n == 1) return;
  e.resize(n, 0.0);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();
  const std::size_t max_sweeps = 100 * n;
  std::size_t sweeps = 0;

  for (std::size_t l = 0; l < n; ++l) {
    for (;;) {
      std::size_t m = l;
      for (; m + 1 < n; ++m)
        if (std::fabs(e[m]) <= eps * (std::fabs(d[m]) + std::fabs(d[m + 1]))) break;
      if (m == l) break;
      if (++sweeps > max_sweeps) {
        std::ostringstream os;
        os << "tridiagonal QL exceeded " << max_sweeps << " sweeps";
        throw Error(ErrorKind::eigen_failure, os.str());
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        if (std::fabs(g) <= std::fabs(f)) {
          c = g / f;
          r = std::hypot(c, 1.0);
          e[i + 1] = f * r;
          s = 1.0 / r;
          c *= s;
        } else {
          s = f / g;
          r = std::hypot(s, 1.0);
          e[i + 1] = g * r;
          c = 1.0 / r;
          s *= c;
        }
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        f = z[i + 1];
        z[i + 1] = s * z[i] + c * f;
        z[i] = c * z[i] - s * f;
      }
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return d[i] < d[j]; });
  std::vector<double> ds(n), zs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ds[i] = d[order[i]];
    zs[i] = z[order[i]];
  }
  d = std::move(ds);
  z = std::move(zs);
}

}  // namespace

QuadratureRule gauss_jacobi_rule(double p, double q, std::size_t m) {
  if (!(p > -1.0) || !(q > -1.0)) {
    std::ostringstream os;
    os << "Gauss-Jacobi exponents must exceed -1, got (" << p << ", " << q << ")";
    throw Error(ErrorKind::domain_error, os.str());
  }
  if (m < 1 || m > 512) throw Error(ErrorKind::invalid_argument, "rule size must be in [1, 512]");

  // Recurrence for P^(a,b) on (-1,1) with weight (1-x)^a (1+x)^b; t = (1+x)/2
  // sends (1+x)^b to t^p and (1-x)^a to (1-t)^q.
  const double a = q, b = p, ab = a + b;
  std::vector<double> diag(m), off(m > 1 ? m - 1 : 0);
  diag[0] = (b - a) / (ab + 2.0);
  for (std::size_t k = 1; k < m; ++k) {
    const double n = static_cast<double>(k);
    const double s = 2.0 * n + ab;
    diag[k] = (b * b - a * a) / (s * (s + 2.0));
    double beta_k;
    if (k == 1) {
      beta_k = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      beta_k = 4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    off[k - 1] = 0.5 * std::sqrt(beta_k);
  }
  for (auto& x : diag) x = 0.5 * (1.0 + x);

  std::vector<double> z(m, 0.0);
  z[0] = 1.0;
  tridiagonal_ql(diag, off, z);

  QuadratureRule rule;
  rule.p = p;
  rule.q = q;
  rule.nodes = std::move(diag);
  const double mu0 = beta_fn(p + 1.0, q + 1.0);
  rule.weights.resize(m);
  for (std::size_t i = 0; i < m; ++i) rule.weights[i] = mu0 * z[i] * z[i];
  for (std::size_t i = 0; i < m; ++i) {
    if (!(rule.nodes[i] > 0.0 && rule.nodes[i] < 1.0) || (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])))
      throw Error(ErrorKind::eigen_failure, "Gauss-Jacobi nodes not strictly inside (0,1) and sorted");
  }
  return rule;
}

std::shared_ptr<const QuadratureRule> cached_rule(double p, double q, std::size_t m) {
  static std::mutex mutex;
  static std::map<std::tuple<double, double, std::size_t>, std::shared_ptr<const QuadratureRule>> cache;
  const auto key = std::make_tuple(p, q, m);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<const QuadratureRule>(gauss_jacobi_rule(p, q, m));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(rule)).first->second;
}

}  // namespace jbessel
