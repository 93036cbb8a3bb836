// Positive real zeros of F and the growth diagnostic on them.
#pragma once

#include <cstddef>
#include <vector>

#include "jbessel/series.hpp"

namespace jbessel {

struct ScanOptions {
  double start = 1e-6;
  double initial_step = 0.0;  ///< 0 picks 0.1/|c_1| (class B) or 0.1/sqrt|c_1| (class A)
  double growth = 1.05;
  double refine_tol = 1e-12;  ///< relative
  std::size_t max_steps = 200000;
  std::size_t max_steps_between_zeros = 1000;  ///< after the first zero
  int max_precision_bits = 8192;  ///< evaluations needing more end the scan
};

struct ZeroSet {
  std::vector<double> lambdas;  ///< strictly increasing, positive
  std::vector<double> F_prime;  ///< F'(lambda_n)
  std::vector<double> f_prime;  ///< f'(lambda_n) = lambda_n^nu F'(lambda_n)
  double refine_tol = 1e-12;
  ModelParams params = validate(RawParams{});

  std::size_t size() const { return lambdas.size(); }
};

/// First `count` sign changes of F on (start, inf).
///
/// The scan step grows by `growth` per step and is capped at a quarter of the
/// last zero spacing (of lambda_1 after the first zero), so consecutive zeros
/// are not jumped once the spacing is known. Each bracket is bisected (at most 40 halvings) and then polished by
/// a bracketed secant (Illinois) to refine_tol.
/// Throws ScanExhausted when the budget runs out or the series can no longer
/// be summed, DerivativeVanishes on a suspected double zero.
ZeroSet find_zeros(const SeriesFunction& sf, std::size_t count, const ScanOptions& options = {});

struct SummabilityReport {
  double slope = 0.0;           ///< d log(lambda_n) / d log(n) over the later zeros
  double slope_stderr = 0.0;
  int exponent = 1;             ///< 1 for class B, 2 for class A
  double partial_sum = 0.0;     ///< sum lambda_n^-exponent over the computed zeros
  double tail_estimate = 0.0;   ///< from the fitted power law; inf when divergent
  bool consistent = false;      ///< exponent * slope > 1
};

/// Needs at least 5 zeros (InsufficientZeros otherwise).
SummabilityReport summability_diagnostic(const ZeroSet& zs);

}  // namespace jbessel
