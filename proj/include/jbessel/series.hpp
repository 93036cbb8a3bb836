// Evaluation of F, F' and f = z^nu F from a coefficient table.
#pragma once

#include <cstddef>
#include <memory>
#include <utility>

#include "jbessel/coefficients.hpp"

namespace jbessel {

inline constexpr double kDefaultSeriesTol = 1e-12;

enum class Parity { all_powers, even_powers };

struct EvalResult {
  double value = 0.0;
  double error_bound = 0.0;  ///< truncation tail plus rounding bound
  std::size_t terms_used = 0;
  int precision_bits = 53;   ///< working precision of the summation
};

struct SeriesOptions {
  bool auto_extend = true;          ///< grow the coefficient cache in blocks of 32
  std::size_t max_terms = 1 << 14;  ///< hard cap with auto_extend
  int max_precision_bits = 1 << 15;
};

/// F(z) = sum_n c_n z^(p n), p = 1 (class B) or 2 (class A).
///
/// Summation runs in double when the largest term is small, otherwise in
/// MPFR at a precision chosen from the largest term so that cancellation
/// near the positive zeros does not eat the result. The precision is a pure
/// function of (z, tol), which keeps results bitwise reproducible.
///
/// High-precision coefficients are regenerated from the exact ratio identity
/// (RatioSequence) with the table's perturbations applied, so any table
/// source evaluates the same F. Ratio caches are shared between copies and
/// extended under a lock; concurrent evaluations are safe.
class SeriesFunction {
 public:
  explicit SeriesFunction(CoefficientTable table, SeriesOptions options = {});

  EvalResult eval_F(double z, double tol = kDefaultSeriesTol) const;
  EvalResult eval_F_prime(double z, double tol = kDefaultSeriesTol) const;

  /// z^nu F(z). Requires z > 0 unless nu is a nonnegative integer.
  double eval_f(double z, double tol = kDefaultSeriesTol) const;

  /// Same function and shared coefficient cache, different limits.
  SeriesFunction with_options(SeriesOptions options) const;
  const SeriesOptions& options() const { return options_; }

  const CoefficientTable& table() const { return table_; }
  const ModelParams& params() const { return table_.params; }
  double nu() const { return table_.params.nu(); }
  Parity parity() const { return parity_; }
  int power() const { return parity_ == Parity::all_powers ? 1 : 2; }

 private:
  struct Cache;
  EvalResult evaluate(double z, double tol, bool derivative) const;

  CoefficientTable table_;
  Parity parity_;
  SeriesOptions options_;
  std::shared_ptr<Cache> cache_;
};

struct OrderEstimate {
  double rho_hat = 0.0;
  double slope = 0.0;         ///< least-squares slope of log|c_n/c_{n-1}| vs log n
  double slope_stderr = 0.0;
};

/// Fits log|c_n/c_{n-1}| against log n over [first, last] and converts the
/// slope s to an order estimate p / (-s), p the power map. The window must
/// lie in [20, N] and hold at least 30 indices.
OrderEstimate estimate_order(const CoefficientTable& table, std::size_t first, std::size_t last);

}  // namespace jbessel
