#include <gtest/gtest.h>

#include <cmath>

#include "jbessel/coefficients.hpp"
#include "oracles.hpp"

using namespace jbessel;

namespace {

ModelParams make(double nu, double alpha, double beta, double a, FunctionClass cls = FunctionClass::B) {
  return validate({nu, alpha, beta, a, cls});
}

double rel_log_diff(const CoefficientTable& x, const CoefficientTable& y, std::size_t n) {
  EXPECT_EQ(x.sign[n], y.sign[n]) << n;
  return std::fabs(std::expm1(x.log_abs[n] - y.log_abs[n]));
}

}  // namespace

TEST(Coefficients, FirstIsA) {
  for (double a : {-0.5, -1.0, -2.0, 3.0}) {
    const auto p = make(0.3, 0.5, 1.0, a);
    EXPECT_EQ(class_b_recurrence(p, 3).value(1), a);
    EXPECT_EQ(class_b_recurrence(p, 3).ratio[1], a);
  }
  const auto pa = make(0.0, 0.0, 0.5, -3.0, FunctionClass::A);
  EXPECT_EQ(class_a_coeffs(pa, 3).ratio[1], -1.5);
}

TEST(Coefficients, BetaZeroMatchesOracle) {
  for (double mu_nu : {0.0, 0.3, 1.7}) {
    const auto p = make(mu_nu, 0.0, 0.0, -1.3);
    const auto t = class_b_recurrence(p, 50);
    for (unsigned n = 0; n <= 50; ++n) {
      const double want = oracle::class_b_beta0(-1.3, p.mu(), n);
      EXPECT_NEAR(t.value(n) / want, 1.0, 1e-11) << n;
    }
  }
}

TEST(Coefficients, FormsAgreeClassB) {
  for (double beta : {0.0, 0.5, 1.0, 2.0, 3.7}) {
    const auto p = make(0.3, 0.5, beta, -2.0);
    const auto r = class_b_recurrence(p, 100);
    const auto c = class_b_closed_form(p, 100);
    for (std::size_t n = 0; n <= 100; ++n) EXPECT_LT(rel_log_diff(r, c, n), 1e-10) << beta << " " << n;
  }
}

TEST(Coefficients, HyperbesselAgrees) {
  for (int k : {0, 1, 2, 3}) {
    const auto p = make(0.0, 0.5, k, -0.5);
    const auto h = hyperbessel_coeffs(p, 100);
    EXPECT_EQ(h.polynomial.k, k);
    EXPECT_EQ(h.polynomial.roots.size(), static_cast<std::size_t>(k));
    const auto r = class_b_recurrence(p, 100);
    for (std::size_t n = 0; n <= 100; ++n) EXPECT_LT(rel_log_diff(r, h.table, n), 1e-10) << k << " " << n;
  }
}

TEST(Coefficients, HyperbesselPolynomialRoots) {
  const auto P = hyperbessel_polynomial(make(0.3, 0.0, 2.0, -1.0));
  for (double j : {1.0, 2.5, 7.0}) EXPECT_NEAR(P.evaluate_from_roots(j) / P.evaluate(j), 1.0, 1e-12);
  // P_1(j) = j + 2 mu + 1
  const auto P1 = hyperbessel_polynomial(make(0.0, 0.0, 1.0, -1.0));
  EXPECT_NEAR(P1.evaluate(4.0), 7.0, 1e-14);
}

TEST(Coefficients, HyperbesselNeedsInteger) {
  try {
    hyperbessel_coeffs(make(0.0, 0.0, 0.5, -1.0), 5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_integer);
  }
}

TEST(Coefficients, ClassAFormsAgree) {
  for (double beta : {0.0, 0.5, 1.0, 2.0}) {
    const auto p = make(0.3, 0.0, beta, -1.0, FunctionClass::A);
    const auto r = class_a_coeffs(p, 100);
    const auto c = class_a_closed_form(p, 100);
    for (std::size_t n = 0; n <= 100; ++n) EXPECT_LT(rel_log_diff(r, c, n), 1e-10) << beta << " " << n;
  }
}

TEST(Coefficients, ClassACosine) {
  // nu = alpha = beta = 0 gives mu = 1 and F = cos(sqrt(-a) z).
  const auto t = class_a_coeffs(make(0.0, 0.0, 0.0, -4.0, FunctionClass::A), 20);
  double fact = 1.0, pw = 1.0;
  for (unsigned n = 1; n <= 20; ++n) {
    fact *= (2.0 * n - 1) * (2.0 * n);
    pw *= -4.0;
    EXPECT_NEAR(t.value(n) / (pw / fact), 1.0, 1e-12) << n;
  }
}

TEST(Coefficients, WrongClassRejected) {
  EXPECT_THROW(class_b_recurrence(make(0, 0, 0, -1, FunctionClass::A), 3), Error);
  EXPECT_THROW(class_a_coeffs(make(0, 0, 0, -1), 3), Error);
}

TEST(Coefficients, Perturbation) {
  const auto t = class_b_recurrence(make(0, 0, 1, -1), 10);
  const auto q = t.perturbed(3, 1.01);
  EXPECT_NEAR(q.value(3) / t.value(3), 1.01, 1e-14);
  EXPECT_NEAR(q.value(4) / t.value(4), 1.0, 1e-14);
  EXPECT_NEAR(q.ratio[4] * q.ratio[3], t.ratio[4] * t.ratio[3], 1e-15);
  EXPECT_DOUBLE_EQ(q.perturbation_factor(3), 1.01);
  EXPECT_DOUBLE_EQ(q.perturbation_factor(2), 1.0);
}

TEST(RatioSequence, DoubleMatchesBigFloat) {
  for (auto cls : {FunctionClass::A, FunctionClass::B}) {
    const auto p = make(0.3, 0.5, 1.5, -2.0, cls);
    RatioSequence<double> d(p, 0.0);
    RatioSequence<BigFloat> b(p, BigFloat(0.0, 256));
    for (int n = 1; n <= 80; ++n) {
      const double x = d.next();
      const double y = b.next().to_double();
      EXPECT_NEAR(x / y, 1.0, 1e-12) << n;
    }
  }
}

TEST(RatioSequence, MatchesTable) {
  const auto p = make(0.0, 0.5, 2.0, -1.0);
  const auto t = class_b_closed_form(p, 60);
  RatioSequence<double> d(p, 0.0);
  for (std::size_t n = 1; n <= 60; ++n) EXPECT_NEAR(d.next() / t.ratio[n], 1.0, 1e-11) << n;
}
