#include <gtest/gtest.h>

#include <cmath>

#include "jbessel/core_math.hpp"
#include "jbessel/verify.hpp"

using namespace jbessel;

namespace {

SeriesFunction make_sf(double nu, double alpha, double beta, double a, FunctionClass cls = FunctionClass::B) {
  return SeriesFunction(make_table(validate({nu, alpha, beta, a, cls}), 64));
}

}  // namespace

TEST(Judge, Rules) {
  EXPECT_EQ(judge(1e-12, 1e-10, 0.0, false), CheckStatus::pass);
  EXPECT_EQ(judge(1e-9, 1e-10, 0.0, false), CheckStatus::fail);
  EXPECT_EQ(judge(1e-9, 1e-10, 1e-9, false), CheckStatus::pass);
  EXPECT_EQ(judge(1e-12, 1e-10, 0.0, true), CheckStatus::evidence);
  EXPECT_EQ(judge(std::nan(""), 1e-10, 0.0, false), CheckStatus::fail);
}

TEST(Gram, BetaZeroOrthogonal) {
  for (auto cls : {FunctionClass::A, FunctionClass::B}) {
    const auto sf = make_sf(0.3, 0.5, 0.0, -1.0, cls);
    const auto g = gram_matrix(sf, find_zeros(sf, 6), 6);
    EXPECT_EQ(g.status, CheckStatus::pass);
    EXPECT_LT(g.max_offdiag, 1e-8);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(g.entries[i][i], 1.0, 1e-14);
  }
}

TEST(Gram, OtherBetaIsEvidence) {
  const auto sf = make_sf(0, 0, 1.0, -1.0);
  const auto g = gram_matrix(sf, find_zeros(sf, 4), 4);
  EXPECT_EQ(g.status, CheckStatus::evidence);
  EXPECT_NEAR(g.entries[0][1], g.entries[1][0], 1e-15);
}

TEST(IntegralEquation, ClassB) {
  const auto sf = make_sf(0.3, 0.5, 2.0, -0.5);
  const auto zs = find_zeros(sf, 1);
  const auto r = integral_eq_residual_B(sf, default_z_samples(zs.lambdas[0]));
  EXPECT_EQ(r.status, CheckStatus::pass) << r.residual;
  EXPECT_EQ(r.samples.size(), 10u);
}

TEST(IntegralEquation, ClassA) {
  const auto sf = make_sf(0.0, 0.5, 1.0, -2.0, FunctionClass::A);
  const auto zs = find_zeros(sf, 1);
  const auto r = integral_eq_residual_A(sf, default_z_samples(zs.lambdas[0]));
  EXPECT_EQ(r.status, CheckStatus::pass) << r.residual;
}

TEST(IntegralEquation, DetectsPerturbation) {
  const auto t = make_table(validate({0, 0, 1.0, -1.0, FunctionClass::B}), 64);
  const SeriesFunction clean(t), sf(t.perturbed(3, 1.01));
  const auto r = integral_eq_residual_B(sf, default_z_samples(find_zeros(clean, 1).lambdas[0]));
  EXPECT_EQ(r.status, CheckStatus::fail);
  EXPECT_GT(r.residual, 1e-4);
}

TEST(Ode, Residual) {
  for (int k : {0, 1, 2}) {
    const auto p = validate({0.3, 0.0, static_cast<double>(k), -1.0, FunctionClass::B});
    const auto r = ode_coefficient_residual(p, make_table(p, 60), 60);
    EXPECT_EQ(r.status, CheckStatus::pass) << k << " " << r.residual;
  }
}

TEST(Ode, DetectsPerturbation) {
  const auto p = validate({0.0, 0.0, 1.0, -1.0, FunctionClass::B});
  const auto r = ode_coefficient_residual(p, make_table(p, 60).perturbed(5, 1.001), 60);
  EXPECT_EQ(r.status, CheckStatus::fail);
}

TEST(Ode, TableTooShort) {
  const auto p = validate({0.0, 0.0, 1.0, -1.0, FunctionClass::B});
  EXPECT_THROW(ode_coefficient_residual(p, make_table(p, 10), 60), Error);
}

TEST(Kernel, BetaZeroConstants) {
  for (auto cls : {FunctionClass::A, FunctionClass::B}) {
    const auto sf = make_sf(0.0, 0.5, 0.0, -1.0, cls);
    const auto zs = find_zeros(sf, 40);
    const auto k = kernel_checks(sf, zs, 40, default_kernel_pairs(zs.lambdas[0]));
    EXPECT_EQ(k.constant.status, CheckStatus::pass) << k.constant.residual << " vs " << k.constant.tolerance;
    EXPECT_EQ(k.identity.status, CheckStatus::pass) << k.identity.note;
  }
}

TEST(Kernel, WeightsSumToBeta) {
  const auto sf = make_sf(0.0, 0.0, 0.0, -1.0);
  const auto ks = build_kernel(sf, find_zeros(sf, 40), 40);
  double s = 0;
  for (double t : ks.constant_terms) s += t;
  const double B = beta_fn(1.0, 1.0);
  EXPECT_LT(s, B);
  EXPECT_LT(B - s, KernelSeries::tail_estimate(ks.constant_terms));
}

TEST(Kernel, TailEstimate) {
  std::vector<double> t;
  for (int n = 1; n <= 40; ++n) t.push_back(1.0 / (n * n));
  const double tail = KernelSeries::tail_estimate(t);
  EXPECT_GT(tail, 1.0 / 40.5 - 1e-3);
  EXPECT_LT(tail, 1.0 / 39.0);
  std::vector<double> harmonic;
  for (int n = 1; n <= 40; ++n) harmonic.push_back(1.0 / n);
  EXPECT_TRUE(std::isinf(KernelSeries::tail_estimate(harmonic)));
}

TEST(Kernel, TooFewZeros) {
  const auto sf = make_sf(0.0, 0.0, 0.0, -1.0);
  EXPECT_THROW(kernel_checks(sf, find_zeros(sf, 10), 40, {}), Error);
}

TEST(Bessel, Reduction) {
  for (auto cls : {FunctionClass::A, FunctionClass::B}) {
    const auto sf = make_sf(0.3, 0.5, 0.0, -2.0, cls);
    const auto r = bessel_reduction_residual(sf, default_z_samples(find_zeros(sf, 1).lambdas[0]));
    EXPECT_EQ(r.status, CheckStatus::pass) << r.residual;
  }
  EXPECT_THROW(bessel_reduction_residual(make_sf(0, 0, 1.0, -1.0), {1.0}), Error);
  EXPECT_THROW(bessel_reduction_residual(make_sf(0, 0, 0.0, 1.0), {1.0}), Error);
}

TEST(Mellin, HAtBetaZero) {
  // beta = 0: h(s) = 1/(nu+alpha-s+1).
  const auto p = validate({0.3, 0.5, 0.0, -1.0, FunctionClass::B});
  EXPECT_NEAR(mellin_h(p, -0.2), 1.0 / 2.0, 1e-15);
}

TEST(Mellin, Identity) {
  for (double beta : {0.0, 0.5, 1.0, 2.0}) {
    const auto p = validate({0.3, 0.5, beta, -1.0, FunctionClass::B});
    const auto r = mellin_kernel_identity(p, default_s_samples(p));
    EXPECT_EQ(r.status, CheckStatus::pass) << beta << " " << r.residual;
    EXPECT_EQ(r.samples.size(), 20u);
  }
}

TEST(Mellin, FormsAgree) {
  const auto p = validate({0.0, 0.5, 1.5, -1.0, FunctionClass::B});
  for (double s : {-0.3, -1.7, -4.2}) EXPECT_NEAR(mellin_H_ratio_form(p, s) / mellin_H_product_form(p, s), 1.0, 1e-12);
}

TEST(Mellin, Poles) {
  const auto p = validate({0.0, 0.0, 0.5, -1.0, FunctionClass::B});
  try {
    mellin_kernel_identity(p, {1.02});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::pole_proximity);
  }
  EXPECT_THROW(mellin_kernel_identity(p, {0.0}), Error);
}

TEST(Tables, Compare) {
  const auto p = validate({0, 0, 1.0, -1.0, FunctionClass::B});
  const auto t = make_table(p, 100);
  EXPECT_EQ(compare_tables(t, make_table(p, 100, CoefficientSource::closed_form), 100).status, CheckStatus::pass);
  EXPECT_EQ(compare_tables(t, t.perturbed(50, 1.0001), 100).status, CheckStatus::fail);
}

TEST(Order, Check) {
  const auto t = make_table(validate({0, 0, 2.0, -1.0, FunctionClass::A}), 200);
  EXPECT_EQ(order_check(t).status, CheckStatus::pass);
}

TEST(ZeroGrowth, BetaZero) {
  const auto sf = make_sf(0, 0, 0, -1);
  EXPECT_EQ(zero_growth_check(find_zeros(sf, 30)).status, CheckStatus::pass);
}

TEST(ParallelFor, RethrowsLowestIndex) {
  std::vector<int> slots(50, 0);
  parallel_for(50, [&](std::size_t i) { slots[i] = static_cast<int>(i); });
  for (int i = 0; i < 50; ++i) EXPECT_EQ(slots[i], i);
  try {
    parallel_for(10, [](std::size_t i) {
      if (i == 3 || i == 7) throw Error(ErrorKind::internal_error, std::to_string(i));
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_STREQ(e.what(), "3");
  }
}
