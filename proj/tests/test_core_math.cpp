#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "jbessel/core_math.hpp"
#include "oracles.hpp"

using namespace jbessel;

TEST(Validate, AcceptsInteriorPoint) {
  const ModelParams p = validate({0.3, 0.5, 1.0, -2.0, FunctionClass::A});
  EXPECT_DOUBLE_EQ(p.mu(), 2.1);
  EXPECT_EQ(p.power(), 2);
  EXPECT_EQ(p.cls(), FunctionClass::A);
}

TEST(Validate, MuBoundaryIsViolation) {
  try {
    validate({-0.5, 0.0, 0.0, -1.0, FunctionClass::B});
    FAIL() << "mu = 0 accepted";
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.which(), Constraint::mu_positive);
  }
}

TEST(Validate, BetaBoundaryIsViolation) {
  try {
    validate({0.0, 0.0, -1.0, -1.0, FunctionClass::B});
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.which(), Constraint::beta_gt_minus1);
  }
}

TEST(Validate, ZeroA) {
  try {
    validate({0.0, 0.0, 0.0, 0.0, FunctionClass::B});
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_EQ(e.which(), Constraint::a_nonzero);
  }
}

TEST(Validate, NonFinite) {
  EXPECT_THROW(validate({std::nan(""), 0.0, 0.0, -1.0, FunctionClass::B}), Error);
  EXPECT_THROW(validate({0.0, 0.0, std::numeric_limits<double>::infinity(), -1.0, FunctionClass::B}), Error);
}

TEST(LogGamma, MatchesFactorialSums) {
  for (unsigned n : {1u, 2u, 5u, 10u, 50u, 170u, 1000u}) {
    const double want = oracle::log_factorial_sum(n);
    EXPECT_NEAR(log_gamma(n), want, 1e-13 * std::max(1.0, want)) << n;
  }
}

TEST(LogGamma, HalfInteger) { EXPECT_NEAR(log_gamma(0.5), 0.5 * std::log(std::numbers::pi), 1e-15); }

TEST(LogGamma, DomainError) {
  try {
    log_gamma(0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_error);
  }
  EXPECT_THROW(log_gamma(-2.5), Error);
}

TEST(SignedLogGamma, NegativeArguments) {
  for (double x : {-0.5, -1.5, -2.3, -7.7}) {
    const SignedLog s = signed_log_gamma(x);
    const double g = std::tgamma(x);
    EXPECT_EQ(s.sign, g < 0 ? -1 : 1) << x;
    EXPECT_NEAR(s.log_abs, std::log(std::fabs(g)), 1e-13) << x;
  }
  EXPECT_THROW(signed_log_gamma(-3.0), Error);
}

TEST(Beta, ClosedFormValue) { EXPECT_NEAR(beta_fn(2.5, 1.5), std::numbers::pi / 16.0, 1e-15); }

TEST(Beta, AgainstStdLgamma) {
  for (double x : {0.1, 1.0, 3.7, 40.0})
    for (double y : {0.2, 1.0, 2.5, 11.0}) EXPECT_NEAR(beta_fn(x, y) / oracle::beta(x, y), 1.0, 1e-13);
}

TEST(Beta, Continued) {
  // B(x, y) = Gamma(x)Gamma(y)/Gamma(x+y) on negative non-integer x.
  for (double x : {-0.3, -1.7, -2.25}) {
    const double want = std::tgamma(x) * std::tgamma(1.5) / std::tgamma(x + 1.5);
    EXPECT_NEAR(beta_continued(x, 1.5) / want, 1.0, 1e-12) << x;
  }
  EXPECT_DOUBLE_EQ(beta_continued(2.0, 3.0), beta_fn(2.0, 3.0));
  // x + y a pole of Gamma, x and y regular.
  EXPECT_EQ(beta_continued(-1.5, -0.5), 0.0);
}

TEST(Pochhammer, Basics) {
  EXPECT_EQ(pochhammer(3.0, 0), 1.0);
  EXPECT_EQ(pochhammer(1.0, 5), 120.0);
  EXPECT_NEAR(pochhammer(0.5, 3), 0.5 * 1.5 * 2.5, 1e-15);
  EXPECT_NEAR(log_pochhammer(2.0, 10), std::lgamma(12.0) - std::lgamma(2.0), 1e-12);
}
