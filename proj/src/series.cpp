#include "jbessel/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <vector>

namespace jbessel {

namespace {

constexpr std::size_t kBlock = 32;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_add(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double m = std::max(x, y);
  return m + std::log1p(std::exp(-std::fabs(x - y)));
}

// Ratios with the table's perturbations folded in: c_k -> f_k c_k turns
// r_k into r_k f_k / f_{k-1}.
double perturbation_ratio(const CoefficientTable& t, std::size_t k) {
  if (t.perturbations.empty()) return 1.0;
  return t.perturbation_factor(k) / t.perturbation_factor(k - 1);
}

}  // namespace

struct SeriesFunction::Cache {
  template <class Real>
  struct Level {
    RatioSequence<Real> generator;
    std::shared_ptr<const std::vector<Real>> ratios;  // index 0 unused
  };

  std::mutex mutex;
  std::unique_ptr<Level<double>> fast;
  std::map<int, std::unique_ptr<Level<BigFloat>>> exact;
};

namespace {

template <class Real>
void extend_level(const CoefficientTable& table, RatioSequence<Real>& gen,
                  std::shared_ptr<const std::vector<Real>>& ratios, std::size_t need,
                  const Real& proto) {
  if (ratios && ratios->size() > need) return;
  auto grown = std::make_shared<std::vector<Real>>();
  if (ratios) {
    *grown = *ratios;
  } else {
    grown->push_back(lift(proto, 1.0));
  }
  const std::size_t target = ((need / kBlock) + 1) * kBlock + 1;
  while (grown->size() < target) {
    Real r = gen.next();
    const std::size_t k = grown->size();
    const double f = perturbation_ratio(table, k);
    if (f != 1.0) r *= f;
    grown->push_back(std::move(r));
  }
  ratios = std::move(grown);
}

}  // namespace

SeriesFunction::SeriesFunction(CoefficientTable table, SeriesOptions options)
    : table_(std::move(table)),
      parity_(table_.params.cls() == FunctionClass::B ? Parity::all_powers : Parity::even_powers),
      options_(options),
      cache_(std::make_shared<Cache>()) {
  for (const auto& p : table_.perturbations)
    if (p.index == 0) throw Error(ErrorKind::invalid_argument, "c_0 is fixed to 1");
}

SeriesFunction SeriesFunction::with_options(SeriesOptions options) const {
  SeriesFunction copy = *this;
  copy.options_ = options;
  return copy;
}

namespace {

struct Plan {
  double log_max = 0.0;  // log of the largest |term|
  std::size_t terms = 0;
};

}  // namespace

EvalResult SeriesFunction::eval_F(double z, double tol) const { return evaluate(z, tol, false); }

EvalResult SeriesFunction::eval_F_prime(double z, double tol) const { return evaluate(z, tol, true); }

double SeriesFunction::eval_f(double z, double tol) const {
  const double nu = table_.params.nu();
  const double F = eval_F(z, tol).value;
  if (z > 0.0) return std::exp(nu * std::log(z)) * F;
  if (nu >= 0.0 && nu == std::floor(nu)) return std::pow(z, nu) * F;
  std::ostringstream os;
  os << "f(z) = z^nu F(z) needs z > 0 for nu = " << nu << ", got z = " << z;
  throw Error(ErrorKind::domain_error, os.str());
}

EvalResult SeriesFunction::evaluate(double z, double tol, bool derivative) const {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_argument, "tol must be positive");
  if (!std::isfinite(z)) throw Error(ErrorKind::domain_error, "z must be finite");
  const int p = power();
  const std::size_t table_limit = table_.max_index();

  // Access to double ratios, extending on demand.
  std::shared_ptr<const std::vector<double>> fast;
  auto fast_ratio = [&](std::size_t n) -> double {
    if (!fast || fast->size() <= n) {
      if (!options_.auto_extend && n > table_limit)
        throw Error(ErrorKind::table_exhausted, "coefficient table exhausted and extension disabled");
      if (n > options_.max_terms)
        throw Error(ErrorKind::table_exhausted, "series did not converge within max_terms");
      std::lock_guard lock(cache_->mutex);
      if (!cache_->fast)
        cache_->fast.reset(new Cache::Level<double>{RatioSequence<double>(table_.params, 0.0), nullptr});
      extend_level(table_, cache_->fast->generator, cache_->fast->ratios, n, 0.0);
      fast = cache_->fast->ratios;
    }
    return (*fast)[n];
  };

  if (z == 0.0) {
    EvalResult r;
    if (!derivative) {
      r.value = 1.0;
      r.terms_used = 1;
    } else if (p == 1) {
      r.value = fast_ratio(1);
      r.terms_used = 2;
    } else {
      r.value = 0.0;
      r.terms_used = 1;
    }
    return r;
  }

  // Plan in log space: magnitude of the largest term decides the precision.
  const double log_x = p * std::log(std::fabs(z));
  const double log_z = std::log(std::fabs(z));
  Plan plan;
  {
    double L = 0.0;
    plan.log_max = derivative ? kNegInf : 0.0;
    for (std::size_t n = 1;; ++n) {
      const double r = fast_ratio(n);
      const double step = std::log(std::fabs(r)) + log_x;
      L += step;
      const double Lc = derivative ? L + std::log(p * static_cast<double>(n)) - log_z : L;
      plan.log_max = std::max(plan.log_max, Lc);
      if (r == 0.0 || (n >= 2 && step < -std::numbers::ln2 && Lc < plan.log_max - 50.0)) {
        plan.terms = n;
        break;
      }
    }
  }

  const double excess_bits = std::max(0.0, plan.log_max / std::numbers::ln2);
  const bool use_double = excess_bits <= 8.0;
  int bits = 53;
  if (!use_double) {
    bits = static_cast<int>(std::ceil((excess_bits + 53.0 + 24.0) / 64.0)) * 64;
    if (bits > options_.max_precision_bits) {
      std::ostringstream os;
      os << "evaluation at z = " << z << " needs " << bits << " bits of precision";
      throw Error(ErrorKind::precision_limit, os.str());
    }
  }

  auto run = [&](auto proto, auto&& ratio_at) -> EvalResult {
    using Real = decltype(proto);
    const Real zr = lift(proto, z);
    Real x = lift(proto, z);
    if (p == 2) x *= zr;
    Real term = lift(proto, 1.0);
    Real contrib = lift(proto, 1.0);
    Real sum = lift(proto, derivative ? 0.0 : 1.0);
    double log_prev = derivative ? kNegInf : 0.0;
    double log_abs_sum = derivative ? kNegInf : 0.0;
    double log_last = log_prev;
    std::size_t n = 1;
    for (;; ++n) {
      term *= ratio_at(n);
      term *= x;
      double lc;
      if (derivative) {
        contrib = term;
        contrib *= p * static_cast<double>(n);
        contrib /= zr;
      } else {
        contrib = term;
      }
      sum += contrib;
      lc = log_abs(contrib);
      log_abs_sum = log_add(log_abs_sum, lc);
      log_last = lc;
      const double log_noise = log_abs_sum - bits * std::numbers::ln2;
      const double threshold = std::log(tol) + std::max(log_abs(sum), log_noise);
      const bool enough_terms = derivative ? n >= 2 : n >= 1;
      if (enough_terms && lc < threshold && log_prev < threshold && lc - log_prev < -std::numbers::ln2) break;
      if (lc == kNegInf && log_prev == kNegInf && n >= 2) break;
      log_prev = lc;
    }
    EvalResult r;
    r.value = to_double(sum);
    const double rounding = std::exp(std::log(2.0 * static_cast<double>(n + 1)) + log_abs_sum -
                                     bits * std::numbers::ln2);
    r.error_bound = 2.0 * std::exp(log_last) + rounding;
    r.terms_used = derivative ? n : n + 1;
    r.precision_bits = bits;
    return r;
  };

  if (use_double) return run(0.0, fast_ratio);

  std::shared_ptr<const std::vector<BigFloat>> exact;
  const BigFloat proto(0.0, bits);
  auto exact_ratio = [&](std::size_t n) -> const BigFloat& {
    if (!exact || exact->size() <= n) {
      if (!options_.auto_extend && n > table_limit)
        throw Error(ErrorKind::table_exhausted, "coefficient table exhausted and extension disabled");
      if (n > options_.max_terms)
        throw Error(ErrorKind::table_exhausted, "series did not converge within max_terms");
      std::lock_guard lock(cache_->mutex);
      auto& level = cache_->exact[bits];
      if (!level)
        level.reset(new Cache::Level<BigFloat>{RatioSequence<BigFloat>(table_.params, proto), nullptr});
      extend_level(table_, level->generator, level->ratios, std::max(n, plan.terms), proto);
      exact = level->ratios;
    }
    return (*exact)[n];
  };
  return run(proto, exact_ratio);
}

OrderEstimate estimate_order(const CoefficientTable& table, std::size_t first, std::size_t last) {
  if (first < 20 || last > table.max_index() || last < first || last - first + 1 < 30) {
    std::ostringstream os;
    os << "order window [" << first << ", " << last << "] must lie in [20, " << table.max_index()
       << "] and hold at least 30 indices";
    throw Error(ErrorKind::invalid_argument, os.str());
  }
  std::vector<double> xs, ys;
  for (std::size_t n = first; n <= last; ++n) {
    if (table.sign[n] == 0 || table.sign[n - 1] == 0 || table.ratio[n] == 0.0)
      throw Error(ErrorKind::degenerate_window, "zero coefficient inside order window");
    xs.push_back(std::log(static_cast<double>(n)));
    ys.push_back(table.log_abs[n] - table.log_abs[n - 1]);
  }
  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    sse += e * e;
  }
  OrderEstimate est;
  est.slope = slope;
  est.slope_stderr = std::sqrt(sse / (m - 2.0) / sxx);
  est.rho_hat = table.params.power() / (-slope);
  return est;
}

}  // namespace jbessel
