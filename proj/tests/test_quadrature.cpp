#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "jbessel/core_math.hpp"
#include "jbessel/quadrature.hpp"
#include "oracles.hpp"

using namespace jbessel;

TEST(Quadrature, LegendreMean) {
  const auto r = gauss_jacobi_rule(0.0, 0.0, 5);
  EXPECT_NEAR(integrate_weighted(r, [](double t) { return t; }), 0.5, 1e-15);
}

TEST(Quadrature, WeightsSumToBeta) {
  const auto r = gauss_jacobi_rule(0.5, -0.5, 16);
  double s = 0;
  for (double w : r.weights) s += w;
  EXPECT_NEAR(s, oracle::beta(1.5, 0.5), 1e-14);
}

TEST(Quadrature, NodesInsideAndSorted) {
  const auto r = gauss_jacobi_rule(-0.7, 2.3, 64);
  ASSERT_EQ(r.size(), 64u);
  for (std::size_t i = 0; i < r.size(); ++i) {
    EXPECT_GT(r.nodes[i], 0.0);
    EXPECT_LT(r.nodes[i], 1.0);
    EXPECT_GT(r.weights[i], 0.0);
    if (i) {
      EXPECT_LT(r.nodes[i - 1], r.nodes[i]);
    }
  }
}

TEST(Quadrature, NodesInterlace) {
  const auto a = gauss_jacobi_rule(1.0, 0.5, 12), b = gauss_jacobi_rule(1.0, 0.5, 13);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LT(b.nodes[i], a.nodes[i]);
    EXPECT_LT(a.nodes[i], b.nodes[i + 1]);
  }
}

TEST(Quadrature, ExactForPolynomialsRandom) {
  // int t^(p+k) (1-t)^q = B(p+k+1, q+1), exact while k <= 2m-1.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> exps(-0.9, 3.0);
  const std::size_t ms[] = {4, 8, 16, 32};
  for (int draw = 0; draw < 200; ++draw) {
    const double p = exps(rng), q = exps(rng);
    const std::size_t m = ms[draw % 4];
    const auto k = static_cast<int>(rng() % (2 * m));
    const auto r = gauss_jacobi_rule(p, q, m);
    const double got = integrate_weighted(r, [k](double t) { return std::pow(t, k); });
    const double want = oracle::beta(p + k + 1.0, q + 1.0);
    EXPECT_NEAR(got / want, 1.0, 1e-11) << "p=" << p << " q=" << q << " m=" << m << " k=" << k;
  }
}

TEST(Quadrature, Adaptive) {
  const auto est = integrate_adaptive(0.0, 0.0, [](double t) { return std::cos(20.0 * t); }, 4, 1e-13);
  EXPECT_NEAR(est.value, std::sin(20.0) / 20.0, 1e-13);
  EXPECT_LT(est.error, 1e-12);
}

TEST(Quadrature, CachedRuleShared) {
  const auto a = cached_rule(0.25, 0.75, 20), b = cached_rule(0.25, 0.75, 20);
  EXPECT_EQ(a.get(), b.get());
  EXPECT_EQ(a->nodes, gauss_jacobi_rule(0.25, 0.75, 20).nodes);
}

TEST(Quadrature, Errors) {
  try {
    gauss_jacobi_rule(-1.0, 0.0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::domain_error);
  }
  EXPECT_THROW(gauss_jacobi_rule(0.0, -1.5, 4), Error);
  try {
    gauss_jacobi_rule(0.0, 0.0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
  EXPECT_THROW(gauss_jacobi_rule(0.0, 0.0, 513), Error);
}
