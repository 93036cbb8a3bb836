// Numerical checks of the identities the model functions satisfy: weighted
// orthogonality over their own zeros, the integral equations, the
// coefficient ODE, the zero-kernel constants, the Bessel reduction and the
// Mellin kernel algebra.
#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jbessel/zeros.hpp"

namespace jbessel {

enum class CheckStatus { pass, fail, evidence };

std::string_view to_string(CheckStatus s);

struct ResidualReport {
  std::string name;
  std::vector<double> samples;
  std::vector<double> abs_residuals;
  std::vector<double> rel_residuals;
  double residual = 0.0;        ///< headline number compared against the tolerance
  double error_estimate = 0.0;  ///< numerical error the check itself carries
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::fail;
  std::string note;
};

/// pass iff residual < max(tolerance, 10 * error_estimate); `evidence`
/// replaces pass/fail for statements that are not established facts.
CheckStatus judge(double residual, double tolerance, double error_estimate, bool evidence_only);

struct GramReport {
  ModelParams params = validate(RawParams{});
  std::vector<double> lambdas;
  std::size_t N = 0;
  std::size_t rule_size = 0;
  std::vector<std::vector<double>> entries;  ///< normalized, unit diagonal
  std::vector<double> norms;                 ///< A_n / lambda_n^(2 nu) = int t^(mu-1)(1-t)^beta F(lambda_n t)^2
  double max_offdiag = 0.0;
  double quadrature_error_estimate = 0.0;    ///< max entry change between m and 2m nodes
  double tolerance = 1e-8;
  CheckStatus status = CheckStatus::fail;
};

/// G_nm = I_nm / sqrt(I_nn I_mm) with I_nm = int_0^1 t^(mu-1)(1-t)^beta
/// F(lambda_n t) F(lambda_m t) dt, the z^nu factors of f cancelling in the
/// normalization. Uses the rule_size and 2*rule_size Gauss-Jacobi rules.
/// Status is pass/fail only at beta = 0; other beta are reported as evidence.
GramReport gram_matrix(const SeriesFunction& sf, const ZeroSet& zs, std::size_t N,
                       std::size_t rule_size = 48, double tolerance = 1e-8);

ResidualReport to_report(const GramReport& g);

/// Class B integral equation in terms of F:
///   a z int t^mu (1-t)^beta F(zt) dt
///     == (az+1) int t^(mu-1) (1-t)^beta F(zt) dt - B(mu, beta+1) F(z).
ResidualReport integral_eq_residual_B(const SeriesFunction& sf, const std::vector<double>& z_samples,
                                      double tolerance = 1e-10, std::size_t rule_size = 48);

/// Class A integral equation in terms of F:
///   a z^2 int t^(mu-1) (t^2-1) (1-t)^beta F(zt) dt
///     == 2 [int t^(mu-1) (1-t)^beta F(zt) dt - B(mu, beta+1) F(z)].
ResidualReport integral_eq_residual_A(const SeriesFunction& sf, const std::vector<double>& z_samples,
                                      double tolerance = 1e-10, std::size_t rule_size = 48);

/// Termwise hyperbessel ODE identity n (n+mu-1) P_k(n) c_n == a (k+1) (mu)_{k+1} c_{n-1}
/// for n = 1..N, with P_k and a from `params` and c_n from `table`.
ResidualReport ode_coefficient_residual(const ModelParams& params, const CoefficientTable& table,
                                        std::size_t N, double tolerance = 1e-11);

/// Partial sums of the zero kernel and its constants.
struct KernelSeries {
  std::size_t M = 0;
  int power = 1;
  std::vector<double> lambdas;
  std::vector<double> weights;        ///< hat A_n / F'(lambda_n)^2
  std::vector<double> weight_errors;  ///< quadrature error carried by each weight
  /// Terms of -q'(0) (class B) or -q''(0)/2 (class A); they sum to B(mu, beta+1).
  std::vector<double> constant_terms;

  /// -F(z)F(zeta)(q(z)-q(zeta))/(z-zeta) (class B) or over (z^2-zeta^2)
  /// (class A), summed without forming the difference.
  double bilinear(double Fz, double Fzeta, double z, double zeta) const;

  /// Upper estimate of sum_{n>M} |t_n|: fits C (n + shift)^-s to the last ten
  /// terms and integrates from M. Infinity when s <= 1.05.
  static double tail_estimate(const std::vector<double>& terms);
};

KernelSeries build_kernel(const SeriesFunction& sf, const ZeroSet& zs, std::size_t M);

struct KernelCheckReport {
  ResidualReport constant;  ///< q'(0) -> -B(mu,beta+1) or q''(0) -> -2B(mu,beta+1)
  ResidualReport identity;  ///< bilinear identity at the (z, zeta) pairs
};

/// Both parts are pass/fail at beta = 0 and evidence otherwise.
/// Throws InsufficientZeros when fewer than M zeros are given or M < 5.
KernelCheckReport kernel_checks(const SeriesFunction& sf, const ZeroSet& zs, std::size_t M,
                                const std::vector<std::pair<double, double>>& pairs);

/// F(z) / Phi(z) constant over the samples, Phi the normalized Bessel series
/// 0F1(; mu; a mu z) (class B) or 0F1(; mu/2; a mu z^2 / 4) (class A).
/// Throws DomainError when a >= 0, InvalidArgument unless beta = 0.
ResidualReport bessel_reduction_residual(const SeriesFunction& sf, const std::vector<double>& z_samples,
                                         double tolerance = 1e-10);

/// h(s) = B(nu+alpha-s+1, beta+1) continued through Gamma. Checks the two
/// closed forms of the Mellin kernel H(s) against each other and
/// h(s) - h(-nu) == (nu+s) chi(s). Throws PoleProximity for s within 0.1 of
/// nu+alpha+n or nu+alpha+beta+2+n (n = 0, 1, ...).
ResidualReport mellin_kernel_identity(const ModelParams& params, const std::vector<double>& s_samples,
                                      double tolerance = 1e-10);

/// Mellin pieces, exposed for tests.
double mellin_h(const ModelParams& params, double s);
double mellin_H_ratio_form(const ModelParams& params, double s);
double mellin_H_product_form(const ModelParams& params, double s);
/// chi(s) = sum (-beta)_n / (n! (mu+n) (nu+alpha+n+1-s)), summed until terms
/// drop below 1e-15, plus an integral estimate of the remainder.
struct ChiValue {
  double value = 0.0;
  double tail_estimate = 0.0;  ///< uncertainty left after the remainder correction
  std::size_t terms = 0;
};
ChiValue mellin_chi(const ModelParams& params, double s);

/// Entry-wise relative difference of two coefficient tables for n <= n_max
/// (log-space comparison, so deep entries do not underflow).
ResidualReport compare_tables(const CoefficientTable& x, const CoefficientTable& y, std::size_t n_max,
                              double tolerance = 1e-10);

/// estimate_order over [first, last] against 1/(beta+2) (class B) or
/// 2/(beta+2) (class A); residual is the absolute difference.
ResidualReport order_check(const CoefficientTable& table, std::size_t first = 50, std::size_t last = 200,
                           double tolerance = 0.02);

/// Zero growth slope against 1/rho; relative residual, evidence unless beta = 0.
ResidualReport zero_growth_check(const ZeroSet& zs, double tolerance = 0.1);

// Default sample sets.
std::vector<double> default_z_samples(double first_zero, std::size_t count = 10);
std::vector<std::pair<double, double>> default_kernel_pairs(double first_zero);
std::vector<double> default_s_samples(const ModelParams& params, std::size_t count = 20);

/// Runs fn(0..n-1) on worker threads. Results must be written to per-index
/// slots, which keeps reductions in index order. The first exception by
/// index is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace jbessel
