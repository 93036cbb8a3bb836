#include "jbessel/core_math.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

namespace jbessel {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::constraint_violation: return "ConstraintViolation";
    case ErrorKind::domain_error: return "DomainError";
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::table_exhausted: return "TableExhausted";
    case ErrorKind::not_integer: return "NotInteger";
    case ErrorKind::root_finding_failure: return "RootFindingFailure";
    case ErrorKind::eigen_failure: return "EigenFailure";
    case ErrorKind::scan_exhausted: return "ScanExhausted";
    case ErrorKind::derivative_vanishes: return "DerivativeVanishes";
    case ErrorKind::degenerate_window: return "DegenerateWindow";
    case ErrorKind::insufficient_zeros: return "InsufficientZeros";
    case ErrorKind::pole_proximity: return "PoleProximity";
    case ErrorKind::precision_limit: return "PrecisionLimit";
    case ErrorKind::internal_error: return "InternalError";
    case ErrorKind::io_error: return "IOError";
  }
  return "Unknown";
}

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::mu_positive: return "mu_positive";
    case Constraint::beta_gt_minus1: return "beta_gt_minus1";
    case Constraint::a_nonzero: return "a_nonzero";
  }
  return "unknown";
}

std::string_view to_string(FunctionClass cls) {
  return cls == FunctionClass::A ? "A" : "B";
}

ModelParams ModelParams::with_a(double a) const {
  RawParams r = raw();
  r.a = a;
  return validate(r);
}

ModelParams validate(const RawParams& raw) {
  auto fail = [](Constraint which, const std::string& what) {
    throw ConstraintViolation(which, what);
  };
  if (!std::isfinite(raw.nu) || !std::isfinite(raw.alpha) ||
      !std::isfinite(raw.beta) || !std::isfinite(raw.a)) {
    throw Error(ErrorKind::invalid_argument, "parameters must be finite");
  }
  const double mu = 2.0 * raw.nu + raw.alpha + 1.0;
  if (!(mu > 0.0)) {
    std::ostringstream os;
    os << "mu = 2 nu + alpha + 1 = " << mu << " must be > 0";
    fail(Constraint::mu_positive, os.str());
  }
  if (!(raw.beta > -1.0)) {
    std::ostringstream os;
    os << "beta = " << raw.beta << " must be > -1";
    fail(Constraint::beta_gt_minus1, os.str());
  }
  if (raw.a == 0.0) fail(Constraint::a_nonzero, "a must be nonzero");

  ModelParams p;
  p.nu_ = raw.nu;
  p.alpha_ = raw.alpha;
  p.beta_ = raw.beta;
  p.a_ = raw.a;
  p.cls_ = raw.cls;
  return p;
}

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream os;
    os << "log_gamma requires x > 0, got " << x;
    throw Error(ErrorKind::domain_error, os.str());
  }
  return boost::math::lgamma(x);
}

SignedLog signed_log_gamma(double x) {
  if (!std::isfinite(x) || (x <= 0.0 && x == std::floor(x))) {
    std::ostringstream os;
    os << "Gamma has a pole at " << x;
    throw Error(ErrorKind::domain_error, os.str());
  }
  if (x > 0.0) return {boost::math::lgamma(x), 1};
  int sign = 1;
  const double l = boost::math::lgamma(x, &sign);
  return {l, sign};
}

double beta_fn(double x, double y) {
  if (!(x > 0.0) || !(y > 0.0)) {
    std::ostringstream os;
    os << "beta_fn requires positive arguments, got (" << x << ", " << y << ")";
    throw Error(ErrorKind::domain_error, os.str());
  }
  return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

double beta_continued(double x, double y) {
  if (x > 0.0 && y > 0.0) return beta_fn(x, y);
  const SignedLog gx = signed_log_gamma(x);
  const SignedLog gy = signed_log_gamma(y);
  const double s = x + y;
  if (s <= 0.0 && s == std::floor(s)) return 0.0;
  const SignedLog gs = signed_log_gamma(s);
  return gx.sign * gy.sign * gs.sign * std::exp(gx.log_abs + gy.log_abs - gs.log_abs);
}

double pochhammer(double b, std::size_t j) {
  double r = 1.0;
  for (std::size_t i = 0; i < j; ++i) r *= b + static_cast<double>(i);
  return r;
}

double log_pochhammer(double b, std::size_t j) {
  if (j == 0) return 0.0;
  return log_gamma(b + static_cast<double>(j)) - log_gamma(b);
}

}  // namespace jbessel
