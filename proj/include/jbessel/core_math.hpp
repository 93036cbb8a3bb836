// Parameter model and scalar special functions shared by every module.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jbessel {

/// Failure categories surfaced by the library. The CLI maps them onto the
/// "type" field of its error objects.
enum class ErrorKind {
  constraint_violation,
  domain_error,
  invalid_argument,
  table_exhausted,
  not_integer,
  root_finding_failure,
  eigen_failure,
  scan_exhausted,
  derivative_vanishes,
  degenerate_window,
  insufficient_zeros,
  pole_proximity,
  precision_limit,
  internal_error,
  io_error,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

enum class Constraint { mu_positive, beta_gt_minus1, a_nonzero };

std::string_view to_string(Constraint c);

class ConstraintViolation : public Error {
 public:
  ConstraintViolation(Constraint which, const std::string& message)
      : Error(ErrorKind::constraint_violation, message), which_(which) {}

  Constraint which() const noexcept { return which_; }

 private:
  Constraint which_;
};

/// Function class: A (even, order < 2) or B (order < 1, F(0) = 1).
enum class FunctionClass { A, B };

std::string_view to_string(FunctionClass cls);

/// Unvalidated parameter tuple as it arrives from a caller or config file.
struct RawParams {
  double nu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double a = -1.0;
  FunctionClass cls = FunctionClass::B;
};

/// Validated parameters (nu, alpha, beta, a, class).
///
/// Construction goes through validate(), so an instance always satisfies
/// mu = 2 nu + alpha + 1 > 0, beta > -1 and a != 0. For class B `a` is F'(0);
/// for class A it is F''(0).
class ModelParams {
 public:
  double nu() const noexcept { return nu_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double a() const noexcept { return a_; }
  FunctionClass cls() const noexcept { return cls_; }

  /// mu = 2 nu + alpha + 1, the combined exponent of t in the weight after
  /// the z^nu factors of f(lambda_n t) f(lambda_m t) are absorbed.
  double mu() const noexcept { return 2.0 * nu_ + alpha_ + 1.0; }

  /// Power map exponent: F is a series in z (class B) or z^2 (class A).
  int power() const noexcept { return cls_ == FunctionClass::B ? 1 : 2; }

  /// Same parameters with a different `a` (used by detector fixtures).
  ModelParams with_a(double a) const;

  RawParams raw() const noexcept { return {nu_, alpha_, beta_, a_, cls_}; }

  friend ModelParams validate(const RawParams& raw);

 private:
  ModelParams() = default;

  double nu_ = 0.0;
  double alpha_ = 0.0;
  double beta_ = 0.0;
  double a_ = -1.0;
  FunctionClass cls_ = FunctionClass::B;
};

/// Checks the strict inequalities mu > 0, beta > -1, a != 0 (boundary
/// equality is a violation). Throws ConstraintViolation naming the first
/// violated constraint.
ModelParams validate(const RawParams& raw);

/// log Gamma(x) for x > 0. Throws Error(domain_error) otherwise.
double log_gamma(double x);

/// log|Gamma(x)| and sign(Gamma(x)) for any real x that is not a pole.
struct SignedLog {
  double log_abs;
  int sign;
};
SignedLog signed_log_gamma(double x);

/// Euler Beta function for x, y > 0, evaluated in log space.
double beta_fn(double x, double y);

/// Beta function continued through Gamma(x)Gamma(y)/Gamma(x+y) to real
/// arguments away from the poles. Returns 0 when x + y is a pole of Gamma
/// and x, y are not.
double beta_continued(double x, double y);

/// Rising factorial (b)_j = b (b+1) ... (b+j-1); (b)_0 = 1.
double pochhammer(double b, std::size_t j);

/// log|(b)_j| for b > 0 via log_gamma.
double log_pochhammer(double b, std::size_t j);

}  // namespace jbessel
