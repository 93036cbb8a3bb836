#include "jbessel/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "jbessel/quadrature.hpp"

namespace jbessel {

namespace {

constexpr double kEvalTol = 1e-15;
constexpr double kInf = std::numeric_limits<double>::infinity();

double F_value(const SeriesFunction& sf, double x) { return sf.eval_F(x, kEvalTol).value; }

// F(scale * t_i) at every node of the rule.
std::vector<double> sample_F(const SeriesFunction& sf, const QuadratureRule& rule, double scale) {
  std::vector<double> v(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) v[i] = F_value(sf, scale * rule.nodes[i]);
  return v;
}

double weighted_dot(const QuadratureRule& rule, const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * x[i] * y[i];
  return s;
}

bool is_beta_zero(const ModelParams& p) { return p.beta() == 0.0; }

void finish(ResidualReport& r) {
  r.residual = 0.0;
  for (double x : r.rel_residuals) r.residual = std::max(r.residual, x);
}

double relative(double abs, double scale) { return scale > 0.0 ? abs / scale : abs; }

}  // namespace

std::string_view to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::evidence: return "evidence";
  }
  return "fail";
}

CheckStatus judge(double residual, double tolerance, double error_estimate, bool evidence_only) {
  if (evidence_only) return CheckStatus::evidence;
  const double bar = std::max(tolerance, 10.0 * error_estimate);
  return residual < bar ? CheckStatus::pass : CheckStatus::fail;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const std::size_t workers =
      std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex mutex;
  std::size_t failed_index = n;
  std::exception_ptr failure;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------- Gram

GramReport gram_matrix(const SeriesFunction& sf, const ZeroSet& zs, std::size_t N, std::size_t rule_size,
                       double tolerance) {
  if (N < 1) throw Error(ErrorKind::invalid_argument, "Gram size must be at least 1");
  if (N > zs.size()) {
    std::ostringstream os;
    os << "Gram size " << N << " needs that many zeros, have " << zs.size();
    throw Error(ErrorKind::insufficient_zeros, os.str());
  }
  const ModelParams& p = sf.params();
  GramReport g;
  g.params = p;
  g.lambdas.assign(zs.lambdas.begin(), zs.lambdas.begin() + static_cast<std::ptrdiff_t>(N));
  g.N = N;
  g.rule_size = rule_size;
  g.tolerance = tolerance;

  const auto coarse = cached_rule(p.mu() - 1.0, p.beta(), rule_size);
  const auto fine = cached_rule(p.mu() - 1.0, p.beta(), 2 * rule_size);
  std::vector<std::vector<double>> vc(N), vf(N);
  parallel_for(N, [&](std::size_t n) {
    vc[n] = sample_F(sf, *coarse, g.lambdas[n]);
    vf[n] = sample_F(sf, *fine, g.lambdas[n]);
  });

  auto normalized = [&](const QuadratureRule& rule, const std::vector<std::vector<double>>& v,
                        std::vector<double>& norms) {
    std::vector<std::vector<double>> G(N, std::vector<double>(N, 0.0));
    norms.resize(N);
    for (std::size_t n = 0; n < N; ++n) norms[n] = weighted_dot(rule, v[n], v[n]);
    for (std::size_t n = 0; n < N; ++n) {
      G[n][n] = 1.0;
      for (std::size_t m = n + 1; m < N; ++m) {
        G[n][m] = weighted_dot(rule, v[n], v[m]) / std::sqrt(norms[n] * norms[m]);
        G[m][n] = G[n][m];
      }
    }
    return G;
  };
  std::vector<double> fine_norms;
  g.entries = normalized(*coarse, vc, g.norms);
  const auto G2 = normalized(*fine, vf, fine_norms);
  for (std::size_t n = 0; n < N; ++n) {
    if (!(g.norms[n] > 0.0)) throw Error(ErrorKind::internal_error, "nonpositive Gram diagonal");
    for (std::size_t m = 0; m < N; ++m) {
      if (n != m) g.max_offdiag = std::max(g.max_offdiag, std::fabs(g.entries[n][m]));
      g.quadrature_error_estimate = std::max(g.quadrature_error_estimate, std::fabs(g.entries[n][m] - G2[n][m]));
    }
  }
  g.status = judge(g.max_offdiag, tolerance, g.quadrature_error_estimate, !is_beta_zero(p));
  // The error-estimate allowance in judge() must not rescue a large
  // off-diagonal: require the threshold itself for a pass.
  if (g.status == CheckStatus::pass && !(g.max_offdiag < tolerance)) g.status = CheckStatus::fail;
  return g;
}

ResidualReport to_report(const GramReport& g) {
  ResidualReport r;
  r.name = "gram_orthogonality";
  r.samples = g.lambdas;
  for (std::size_t n = 0; n < g.N; ++n)
    for (std::size_t m = n + 1; m < g.N; ++m) {
      r.abs_residuals.push_back(std::fabs(g.entries[n][m]));
      r.rel_residuals.push_back(std::fabs(g.entries[n][m]));
    }
  r.residual = g.max_offdiag;
  r.error_estimate = g.quadrature_error_estimate;
  r.tolerance = g.tolerance;
  r.status = g.status;
  std::ostringstream os;
  os << "N=" << g.N << ", m=" << g.rule_size << " vs " << 2 * g.rule_size;
  if (g.status == CheckStatus::evidence) os << "; orthogonality is open for beta != 0";
  r.note = os.str();
  return r;
}

// ---------------------------------------------------------------- integral equations

namespace {

struct SideValues {
  double lhs, rhs, scale, err;
};

template <class Sides>
ResidualReport integral_eq_common(std::string name, const std::vector<double>& z_samples, double tolerance,
                                  Sides&& sides) {
  ResidualReport r;
  r.name = std::move(name);
  r.samples = z_samples;
  r.tolerance = tolerance;
  const std::size_t n = z_samples.size();
  std::vector<SideValues> vals(n);
  parallel_for(n, [&](std::size_t i) { vals[i] = sides(z_samples[i]); });
  for (const auto& v : vals) {
    const double abs = std::fabs(v.lhs - v.rhs);
    r.abs_residuals.push_back(abs);
    r.rel_residuals.push_back(relative(abs, v.scale));
    r.error_estimate = std::max(r.error_estimate, relative(v.err, v.scale));
  }
  finish(r);
  r.status = judge(r.residual, tolerance, r.error_estimate, false);
  return r;
}

}  // namespace

ResidualReport integral_eq_residual_B(const SeriesFunction& sf, const std::vector<double>& z_samples,
                                      double tolerance, std::size_t rule_size) {
  const ModelParams& p = sf.params();
  if (p.cls() != FunctionClass::B) throw Error(ErrorKind::invalid_argument, "class B integral equation needs a class B function");
  const double mu = p.mu(), beta = p.beta(), a = p.a();
  const double B = beta_fn(mu, beta + 1.0);
  const auto r1 = cached_rule(mu, beta, rule_size), r1f = cached_rule(mu, beta, 2 * rule_size);
  const auto r0 = cached_rule(mu - 1.0, beta, rule_size), r0f = cached_rule(mu - 1.0, beta, 2 * rule_size);

  return integral_eq_common("integral_equation_B", z_samples, tolerance, [&](double z) {
    auto g = [&](double t) { return F_value(sf, z * t); };
    const double I1 = integrate_weighted(*r1, g), I1f = integrate_weighted(*r1f, g);
    const double I0 = integrate_weighted(*r0, g), I0f = integrate_weighted(*r0f, g);
    const EvalResult Fz = sf.eval_F(z, kEvalTol);
    SideValues v;
    v.lhs = a * z * I1f;
    v.rhs = (a * z + 1.0) * I0f - B * Fz.value;
    v.scale = std::max({std::fabs(v.lhs), std::fabs(v.rhs), B * std::fabs(Fz.value)});
    v.err = std::fabs(a * z) * std::fabs(I1 - I1f) + std::fabs(a * z + 1.0) * std::fabs(I0 - I0f) +
            B * Fz.error_bound;
    return v;
  });
}

ResidualReport integral_eq_residual_A(const SeriesFunction& sf, const std::vector<double>& z_samples,
                                      double tolerance, std::size_t rule_size) {
  const ModelParams& p = sf.params();
  if (p.cls() != FunctionClass::A) throw Error(ErrorKind::invalid_argument, "class A integral equation needs a class A function");
  const double mu = p.mu(), beta = p.beta(), a = p.a();
  const double B = beta_fn(mu, beta + 1.0);
  // t^2 - 1 = -(1-t)(1+t): the extra (1-t) moves into the weight.
  const auto r1 = cached_rule(mu - 1.0, beta + 1.0, rule_size), r1f = cached_rule(mu - 1.0, beta + 1.0, 2 * rule_size);
  const auto r0 = cached_rule(mu - 1.0, beta, rule_size), r0f = cached_rule(mu - 1.0, beta, 2 * rule_size);

  return integral_eq_common("integral_equation_A", z_samples, tolerance, [&](double z) {
    auto g1 = [&](double t) { return -(1.0 + t) * F_value(sf, z * t); };
    auto g0 = [&](double t) { return F_value(sf, z * t); };
    const double I1 = integrate_weighted(*r1, g1), I1f = integrate_weighted(*r1f, g1);
    const double I0 = integrate_weighted(*r0, g0), I0f = integrate_weighted(*r0f, g0);
    const EvalResult Fz = sf.eval_F(z, kEvalTol);
    SideValues v;
    v.lhs = a * z * z * I1f;
    v.rhs = 2.0 * (I0f - B * Fz.value);
    v.scale = std::max({std::fabs(v.lhs), std::fabs(v.rhs), 2.0 * B * std::fabs(Fz.value)});
    v.err = std::fabs(a * z * z) * std::fabs(I1 - I1f) + 2.0 * std::fabs(I0 - I0f) + 2.0 * B * Fz.error_bound;
    return v;
  });
}

// ---------------------------------------------------------------- ODE

ResidualReport ode_coefficient_residual(const ModelParams& params, const CoefficientTable& table, std::size_t N,
                                        double tolerance) {
  if (params.cls() != FunctionClass::B)
    throw Error(ErrorKind::invalid_argument, "the hyperbessel equation concerns class B functions");
  if (N > table.max_index()) {
    std::ostringstream os;
    os << "ODE check up to n = " << N << " but the table ends at " << table.max_index();
    throw Error(ErrorKind::table_exhausted, os.str());
  }
  const HyperbesselPolynomial P = hyperbessel_polynomial(params);
  const double mu = params.mu();
  const double K = params.a() * (P.k + 1) * pochhammer(mu, static_cast<std::size_t>(P.k) + 1);

  ResidualReport r;
  r.name = "ode_coefficients";
  r.tolerance = tolerance;
  for (std::size_t n = 1; n <= N; ++n) {
    const double nd = static_cast<double>(n);
    // Both sides divided by |c_{n-1}|; the ratio stays in range where c_n does not.
    const double lhs = nd * (nd + mu - 1.0) * P.evaluate_from_roots(nd) * table.ratio[n];
    const double abs = std::fabs(lhs - K);
    r.samples.push_back(nd);
    r.abs_residuals.push_back(abs);
    r.rel_residuals.push_back(relative(abs, std::max(std::fabs(lhs), std::fabs(K))));
  }
  finish(r);
  r.error_estimate = 64.0 * std::numeric_limits<double>::epsilon() * (P.k + 2);
  r.status = judge(r.residual, tolerance, r.error_estimate, false);
  std::ostringstream os;
  os << "k=" << P.k << ", residuals relative to |c_{n-1}| (log-space table)";
  r.note = os.str();
  return r;
}

// ---------------------------------------------------------------- kernel

double KernelSeries::bilinear(double Fz, double Fzeta, double z, double zeta) const {
  double s = 0.0;
  for (std::size_t n = 0; n < M; ++n) {
    const double lam = lambdas[n];
    if (power == 1) {
      s += weights[n] / ((z - lam) * (zeta - lam));
    } else {
      const double l2 = lam * lam;
      s += 4.0 * weights[n] * l2 / ((z * z - l2) * (zeta * zeta - l2));
    }
  }
  return Fz * Fzeta * s;
}

namespace {

struct ShiftedPowerFit {
  double log_c = 0.0, s = 0.0, shift = 0.0, sse = 0.0;
};

// Least squares of log t_n = log C - s log(n + shift) for fixed shift.
ShiftedPowerFit fit_for_shift(const std::vector<double>& ns, const std::vector<double>& ys, double shift) {
  const double k = static_cast<double>(ns.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> xs(ns.size());
  for (std::size_t i = 0; i < ns.size(); ++i) {
    xs[i] = std::log(ns[i] + shift);
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ShiftedPowerFit f;
  f.shift = shift;
  f.s = -sxy / sxx;
  f.log_c = my + f.s * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (f.log_c - f.s * xs[i]);
    f.sse += e * e;
  }
  return f;
}

}  // namespace

double KernelSeries::tail_estimate(const std::vector<double>& terms) {
  const std::size_t n = terms.size();
  if (n < 5) return kInf;
  const std::size_t k = std::min<std::size_t>(10, n);
  std::vector<double> ns, ys;
  for (std::size_t i = n - k; i < n; ++i) {
    const double t = std::fabs(terms[i]);
    if (!(t > 0.0)) return 0.0;
    ns.push_back(static_cast<double>(i + 1));
    ys.push_back(std::log(t));
  }
  // Terms such as 1/(n - 1/2)^2 are poorly described by a pure power of n
  // over a short window, so the offset is fitted too: coarse grid, then
  // golden-section refinement.
  const double lo = 0.5 - ns.front(), hi = 4.0 * static_cast<double>(n);
  ShiftedPowerFit best = fit_for_shift(ns, ys, 0.0);
  double step = (hi - lo) / 400.0;
  for (int i = 0; i <= 400; ++i) {
    const auto f = fit_for_shift(ns, ys, lo + step * i);
    if (f.sse < best.sse) best = f;
  }
  double a = std::max(lo, best.shift - step), b = std::min(hi, best.shift + step);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (fit_for_shift(ns, ys, c).sse < fit_for_shift(ns, ys, d).sse) {
      b = d;
    } else {
      a = c;
    }
  }
  const auto f = fit_for_shift(ns, ys, 0.5 * (a + b));
  if (f.sse < best.sse) best = f;
  if (!(best.s > 1.05)) return kInf;
  // Decreasing terms: sum_{j>n} t(j) <= int_n^inf C (x + shift)^-s dx.
  const double last = static_cast<double>(n) + best.shift;
  return std::exp(best.log_c + (1.0 - best.s) * std::log(last)) / (best.s - 1.0);
}

KernelSeries build_kernel(const SeriesFunction& sf, const ZeroSet& zs, std::size_t M) {
  if (M < 5 || M > zs.size()) {
    std::ostringstream os;
    os << "kernel series needs 5 <= M <= " << zs.size() << " zeros, got M = " << M;
    throw Error(ErrorKind::insufficient_zeros, os.str());
  }
  const ModelParams& p = sf.params();
  KernelSeries k;
  k.M = M;
  k.power = p.power();
  k.lambdas.assign(zs.lambdas.begin(), zs.lambdas.begin() + static_cast<std::ptrdiff_t>(M));
  k.weights.resize(M);
  k.weight_errors.resize(M);
  k.constant_terms.resize(M);
  parallel_for(M, [&](std::size_t n) {
    const double lam = k.lambdas[n];
    auto sq = [&](double t) {
      const double v = F_value(sf, lam * t);
      return v * v;
    };
    const QuadratureEstimate A = integrate_adaptive(p.mu() - 1.0, p.beta(), sq, 48, 1e-14, 512);
    const double d2 = zs.F_prime[n] * zs.F_prime[n];
    k.weights[n] = A.value / d2;
    k.weight_errors[n] = A.error / d2;
    const double c = k.power == 1 ? 1.0 : 4.0;
    k.constant_terms[n] = c * k.weights[n] / (lam * lam);
  });
  return k;
}

KernelCheckReport kernel_checks(const SeriesFunction& sf, const ZeroSet& zs, std::size_t M,
                                const std::vector<std::pair<double, double>>& pairs) {
  const ModelParams& p = sf.params();
  const bool evidence = !is_beta_zero(p);
  const KernelSeries k = build_kernel(sf, zs, M);
  const double B = beta_fn(p.mu(), p.beta() + 1.0);
  const double c = k.power == 1 ? 1.0 : 4.0;

  KernelCheckReport out;
  {
    ResidualReport& r = out.constant;
    r.name = k.power == 1 ? "kernel_q_prime_at_0" : "kernel_q_second_at_0";
    double S = 0.0, quad = 0.0;
    for (std::size_t n = 0; n < M; ++n) {
      S += k.constant_terms[n];
      quad += c * k.weight_errors[n] / (k.lambdas[n] * k.lambdas[n]);
    }
    const double tail = KernelSeries::tail_estimate(k.constant_terms);
    // Reported in the printed normalization: q'(0) = -S or q''(0) = -2S.
    const double scale = k.power == 1 ? 1.0 : 2.0;
    r.samples = {static_cast<double>(M)};
    r.abs_residuals = {scale * std::fabs(S - B)};
    r.rel_residuals = {std::fabs(S - B) / B};
    r.residual = r.rel_residuals[0];
    r.error_estimate = (tail + quad) / B;
    r.tolerance = r.error_estimate;
    if (evidence) {
      r.status = CheckStatus::evidence;
    } else {
      r.status = r.residual < r.tolerance ? CheckStatus::pass : CheckStatus::fail;
    }
    std::ostringstream os;
    os.precision(17);
    os << "M=" << M << ", series " << -scale * S << " vs " << -scale * B << ", tail estimate " << scale * tail;
    r.note = os.str();
  }
  {
    ResidualReport& r = out.identity;
    r.name = "kernel_identity";
    const std::size_t np = pairs.size();
    std::vector<double> abs(np), scale(np), est(np);
    parallel_for(np, [&](std::size_t i) {
      const auto [z, zeta] = pairs[i];
      auto g = [&](double t) { return F_value(sf, z * t) * F_value(sf, zeta * t); };
      const QuadratureEstimate I = integrate_adaptive(p.mu() - 1.0, p.beta(), g, 48, 1e-14, 512);
      const EvalResult Fz = sf.eval_F(z, kEvalTol), Fw = sf.eval_F(zeta, kEvalTol);
      const double rhs = k.bilinear(Fz.value, Fw.value, z, zeta);
      std::vector<double> terms(M);
      double quad = I.error;
      for (std::size_t n = 0; n < M; ++n) {
        const double lam = k.lambdas[n];
        const double denom = k.power == 1 ? (z - lam) * (zeta - lam) : (z * z - lam * lam) * (zeta * zeta - lam * lam);
        const double f = c * (k.power == 1 ? 1.0 : lam * lam) * Fz.value * Fw.value / denom;
        terms[n] = f * k.weights[n];
        quad += std::fabs(f) * k.weight_errors[n];
      }
      abs[i] = std::fabs(I.value - rhs);
      scale[i] = std::max(std::fabs(I.value), std::fabs(rhs));
      est[i] = KernelSeries::tail_estimate(terms) + quad + std::fabs(rhs) * 1e-14;
    });
    r.tolerance = 0.0;
    bool all_within = true;
    for (std::size_t i = 0; i < np; ++i) {
      r.samples.push_back(pairs[i].first);
      r.samples.push_back(pairs[i].second);
      r.abs_residuals.push_back(abs[i]);
      r.rel_residuals.push_back(relative(abs[i], scale[i]));
      r.error_estimate = std::max(r.error_estimate, relative(est[i], scale[i]));
      if (!(abs[i] < est[i])) all_within = false;
    }
    finish(r);
    r.tolerance = r.error_estimate;
    if (evidence) {
      r.status = CheckStatus::evidence;
    } else {
      r.status = all_within ? CheckStatus::pass : CheckStatus::fail;
    }
    r.note = "pairwise: |residual| below truncation tail plus quadrature error";
  }
  return out;
}

// ---------------------------------------------------------------- Bessel reduction

namespace {

// 0F1(; b; y) by its own term recurrence, in extended precision.
long double hyp0f1(long double b, long double y) {
  long double term = 1.0L, sum = 1.0L;
  for (int n = 1; n < 10000; ++n) {
    term *= y / (static_cast<long double>(n) * (b + n - 1));
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum) && n > 2) break;
  }
  return sum;
}

}  // namespace

ResidualReport bessel_reduction_residual(const SeriesFunction& sf, const std::vector<double>& z_samples,
                                         double tolerance) {
  const ModelParams& p = sf.params();
  if (!(p.a() < 0.0)) {
    std::ostringstream os;
    os << "Bessel reduction needs a < 0 (real Bessel argument), got a = " << p.a();
    throw Error(ErrorKind::domain_error, os.str());
  }
  if (!is_beta_zero(p)) throw Error(ErrorKind::invalid_argument, "Bessel reduction holds at beta = 0 only");
  const long double mu = p.mu(), a = p.a();
  ResidualReport r;
  r.name = "bessel_reduction";
  r.samples = z_samples;
  r.tolerance = tolerance;
  std::vector<double> ratios;
  double err = 0.0;
  for (double z : z_samples) {
    const EvalResult F = sf.eval_F(z, kEvalTol);
    const long double Phi = p.cls() == FunctionClass::B ? hyp0f1(mu, a * mu * z)
                                                        : hyp0f1(mu / 2, a * mu * z * z / 4);
    ratios.push_back(static_cast<double>(F.value / Phi));
    err = std::max(err, F.error_bound / std::fabs(F.value));
  }
  double mean = 0.0;
  for (double x : ratios) mean += x;
  mean /= static_cast<double>(ratios.size());
  for (double x : ratios) {
    r.abs_residuals.push_back(std::fabs(x - mean));
    r.rel_residuals.push_back(std::fabs(x - mean) / std::fabs(mean));
  }
  finish(r);
  r.error_estimate = err + 1e-15;
  r.status = judge(r.residual, tolerance, r.error_estimate, false);
  r.note = p.cls() == FunctionClass::B ? "F / 0F1(; mu; a mu z)" : "F / 0F1(; mu/2; a mu z^2/4)";
  return r;
}

// ---------------------------------------------------------------- Mellin

namespace {

void check_poles(const ModelParams& p, double s) {
  const double base = p.nu() + p.alpha();
  for (double pole0 : {base, base + p.beta() + 2.0}) {
    if (s < pole0 - 0.1) continue;
    const double k = std::max(0.0, std::round(s - pole0));
    if (std::fabs(s - pole0 - k) < 0.1) {
      std::ostringstream os;
      os << "s = " << s << " lies within 0.1 of a pole of the Mellin kernel";
      throw Error(ErrorKind::pole_proximity, os.str());
    }
  }
}

}  // namespace

double mellin_h(const ModelParams& params, double s) {
  return beta_continued(params.nu() + params.alpha() - s + 1.0, params.beta() + 1.0);
}

double mellin_H_ratio_form(const ModelParams& params, double s) {
  const double h = mellin_h(params, s), h0 = mellin_h(params, -params.nu());
  return (h - h0) / (params.a() * (h - mellin_h(params, s + 1.0)));
}

double mellin_H_product_form(const ModelParams& params, double s) {
  const double h = mellin_h(params, s), h0 = mellin_h(params, -params.nu());
  return (s - params.nu() - params.alpha()) * (h - h0) / (params.a() * (params.beta() + 1.0) * h);
}

ChiValue mellin_chi(const ModelParams& params, double s) {
  const double beta = params.beta(), mu = params.mu(), shift = params.nu() + params.alpha() + 1.0 - s;
  ChiValue out;
  double coef = 1.0;  // (-beta)_n / n!
  double last = 0.0;
  std::size_t n = 0;
  for (; n < 50000000; ++n) {
    if (n > 0) coef *= (static_cast<double>(n) - 1.0 - beta) / static_cast<double>(n);
    if (coef == 0.0) break;
    const double nd = static_cast<double>(n);
    const double term = coef / ((mu + nd) * (shift + nd));
    out.value += term;
    last = term;
    if (std::fabs(term) < 1e-15 && n > 0) break;
  }
  out.terms = n + 1;
  if (coef != 0.0) {
    // Terms behave like C n^-(beta+3); add the remaining sum, approximated by
    // the integral from n + 1/2, and keep its next-order size as the error.
    const double p = beta + 3.0, nd = static_cast<double>(n);
    const double tail = last * std::pow(nd, p) * std::pow(nd + 0.5, 1.0 - p) / (p - 1.0);
    out.value += tail;
    out.tail_estimate = std::fabs(tail) * (p + std::fabs(mu) + std::fabs(shift) + 1.0) / nd;
  }
  return out;
}

ResidualReport mellin_kernel_identity(const ModelParams& params, const std::vector<double>& s_samples,
                                      double tolerance) {
  for (double s : s_samples) check_poles(params, s);
  ResidualReport r;
  r.name = "mellin_kernel";
  r.samples = s_samples;
  r.tolerance = tolerance;
  const double h0 = mellin_h(params, -params.nu());
  constexpr double kRound = 1e-14;
  for (double s : s_samples) {
    const double H3 = mellin_H_ratio_form(params, s);
    const double H4 = mellin_H_product_form(params, s);
    const double dH = std::fabs(H3 - H4);
    const double sH = std::max(std::fabs(H3), std::fabs(H4));

    const double lhs = mellin_h(params, s) - h0;
    const ChiValue chi = mellin_chi(params, s);
    const double rhs = (params.nu() + s) * chi.value;
    const double dC = std::fabs(lhs - rhs);
    const double sC = std::max({std::fabs(lhs), std::fabs(rhs), std::fabs(h0)});

    r.abs_residuals.push_back(std::max(dH, dC));
    r.rel_residuals.push_back(std::max(relative(dH, sH), relative(dC, sC)));
    r.error_estimate = std::max(r.error_estimate, relative(std::fabs(params.nu() + s) * chi.tail_estimate, sC) + kRound);
  }
  finish(r);
  r.status = judge(r.residual, tolerance, r.error_estimate, false);
  r.note = "max of the H-form and chi-factorization residuals per sample";
  return r;
}

// ---------------------------------------------------------------- tables and growth

ResidualReport compare_tables(const CoefficientTable& x, const CoefficientTable& y, std::size_t n_max,
                              double tolerance) {
  const std::size_t n = std::min({n_max, x.max_index(), y.max_index()});
  ResidualReport r;
  r.name = "coefficient_forms";
  r.tolerance = tolerance;
  for (std::size_t k = 0; k <= n; ++k) {
    double rel;
    if (x.sign[k] != y.sign[k]) {
      rel = (x.sign[k] == 0 || y.sign[k] == 0) ? 1.0 : 2.0;
    } else if (x.sign[k] == 0) {
      rel = 0.0;
    } else {
      // |x - y| / max(|x|, |y|) from the log difference.
      rel = -std::expm1(-std::fabs(x.log_abs[k] - y.log_abs[k]));
    }
    r.samples.push_back(static_cast<double>(k));
    r.abs_residuals.push_back(rel);
    r.rel_residuals.push_back(rel);
  }
  finish(r);
  r.error_estimate = 1e-13;
  r.status = judge(r.residual, tolerance, r.error_estimate, false);
  r.note = std::string(to_string(x.source)) + " vs " + std::string(to_string(y.source));
  return r;
}

ResidualReport order_check(const CoefficientTable& table, std::size_t first, std::size_t last, double tolerance) {
  const OrderEstimate est = estimate_order(table, first, last);
  const ModelParams& p = table.params;
  const double rho = p.power() / (p.beta() + 2.0);
  ResidualReport r;
  r.name = "order";
  r.samples = {static_cast<double>(first), static_cast<double>(last)};
  r.abs_residuals = {std::fabs(est.rho_hat - rho)};
  r.rel_residuals = {std::fabs(est.rho_hat - rho)};
  r.residual = r.abs_residuals[0];
  // Propagated slope uncertainty: d rho = rho^2 / p * d slope.
  r.error_estimate = rho * rho / p.power() * est.slope_stderr;
  r.tolerance = tolerance;
  r.status = r.residual < tolerance ? CheckStatus::pass : CheckStatus::fail;
  std::ostringstream os;
  os.precision(17);
  os << "rho_hat " << est.rho_hat << " vs " << rho;
  r.note = os.str();
  return r;
}

ResidualReport zero_growth_check(const ZeroSet& zs, double tolerance) {
  const SummabilityReport d = summability_diagnostic(zs);
  const ModelParams& p = zs.params;
  const double inv_rho = (p.beta() + 2.0) / p.power();
  ResidualReport r;
  r.name = "zero_growth";
  r.samples = {static_cast<double>(zs.size())};
  r.abs_residuals = {std::fabs(d.slope - inv_rho)};
  r.rel_residuals = {std::fabs(d.slope - inv_rho) / inv_rho};
  r.residual = r.rel_residuals[0];
  r.error_estimate = d.slope_stderr / inv_rho;
  r.tolerance = tolerance;
  if (!is_beta_zero(p)) {
    r.status = CheckStatus::evidence;
  } else {
    r.status = r.residual < tolerance && d.consistent ? CheckStatus::pass : CheckStatus::fail;
  }
  std::ostringstream os;
  os.precision(17);
  os << "slope " << d.slope << " vs 1/rho " << inv_rho << ", sum lambda^-" << d.exponent << " = " << d.partial_sum
     << " + tail " << d.tail_estimate << (d.consistent ? "" : " (divergent growth)");
  r.note = os.str();
  return r;
}

// ---------------------------------------------------------------- samples

std::vector<double> default_z_samples(double first_zero, std::size_t count) {
  std::vector<double> z;
  for (std::size_t k = 1; k <= count; ++k) z.push_back(4.0 * first_zero * static_cast<double>(k) / static_cast<double>(count));
  return z;
}

std::vector<std::pair<double, double>> default_kernel_pairs(double first_zero) {
  const double l = first_zero;
  return {{0.35 * l, 0.62 * l}, {0.1 * l, 0.8 * l}, {0.5 * l, 0.5 * l + 1e-3}, {0.25 * l, 0.45 * l}, {0.05 * l, 0.3 * l}};
}

std::vector<double> default_s_samples(const ModelParams& params, std::size_t count) {
  std::vector<double> s;
  const double base = params.nu() + params.alpha();
  for (std::size_t k = 0; k < count; ++k) s.push_back(base + 0.5 - 0.37 * static_cast<double>(k));
  return s;
}

}  // namespace jbessel
