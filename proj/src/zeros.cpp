#include "jbessel/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace jbessel {

namespace {

constexpr double kEvalTol = 1e-15;
constexpr int kMaxBisections = 40;
constexpr int kMaxSecant = 100;

class ScanFailure : public Error {
 public:
  explicit ScanFailure(const std::string& what) : Error(ErrorKind::scan_exhausted, what) {}
};

double F_at(const SeriesFunction& sf, double x) {
  try {
    const double v = sf.eval_F(x, kEvalTol).value;
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "zero scan stopped at x = " << x << ": F overflows the double range";
      throw ScanFailure(os.str());
    }
    return v;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::precision_limit || e.kind() == ErrorKind::table_exhausted) {
      std::ostringstream os;
      os << "zero scan stopped at x = " << x << ": " << e.what();
      throw ScanFailure(os.str());
    }
    throw;
  }
}

// Bisect [lo, hi] (F(lo), F(hi) of opposite sign), then polish with the
// Illinois variant of regula falsi.
double refine(const SeriesFunction& sf, double lo, double hi, double flo, double fhi, double rtol) {
  auto width_ok = [&](double l, double h) { return h - l <= rtol * std::fabs(0.5 * (l + h)); };
  for (int i = 0; i < kMaxBisections && !width_ok(lo, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = F_at(sf, mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
    // A handful of halvings is enough to make the secant step reliable.
    if (i >= 8 && (hi - lo) <= 1e-3 * std::fabs(hi)) break;
  }
  int side = 0;
  for (int i = 0; i < kMaxSecant && !width_ok(lo, hi); ++i) {
    double x = (lo * fhi - hi * flo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = F_at(sf, x);
    if (fx == 0.0) return x;
    if ((fx < 0.0) == (flo < 0.0)) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    // Interval collapse at one end: also stop once the step is below tolerance.
    if (std::min(x - lo, hi - x) <= 0.25 * rtol * std::fabs(x) && width_ok(lo, hi)) break;
  }
  if (!width_ok(lo, hi)) {
    // Secant stalled on one side; finish by bisection.
    for (int i = 0; i < 200 && !width_ok(lo, hi); ++i) {
      const double mid = 0.5 * (lo + hi);
      const double fm = F_at(sf, mid);
      if (fm == 0.0) return mid;
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
        fhi = fm;
      }
    }
  }
  return std::fabs(flo) <= std::fabs(fhi) ? lo : hi;
}

}  // namespace

ZeroSet find_zeros(const SeriesFunction& sf_in, std::size_t count, const ScanOptions& options) {
  if (count < 1) throw Error(ErrorKind::invalid_argument, "zero count must be at least 1");
  if (!(options.start > 0.0) || !(options.growth >= 1.0) || !(options.refine_tol > 0.0))
    throw Error(ErrorKind::invalid_argument, "scan needs start > 0, growth >= 1, refine_tol > 0");

  SeriesOptions limits = sf_in.options();
  limits.max_precision_bits = std::min(limits.max_precision_bits, options.max_precision_bits);
  const SeriesFunction sf = sf_in.with_options(limits);

  ZeroSet zs;
  zs.refine_tol = options.refine_tol;
  zs.params = sf.params();
  const double c1 = std::fabs(sf.table().value(1));
  double step = options.initial_step;
  if (!(step > 0.0)) step = sf.power() == 1 ? 0.1 / c1 : 0.1 / std::sqrt(c1);

  double x = options.start;
  double fx = F_at(sf, x);
  double last_spacing = 0.0;
  std::size_t steps = 0, since_zero = 0;
  while (zs.lambdas.size() < count) {
    if (++steps > options.max_steps || (!zs.lambdas.empty() && ++since_zero > options.max_steps_between_zeros)) {
      std::ostringstream os;
      os << "no sign change of F found within the scan budget (" << steps << " steps, found "
         << zs.lambdas.size() << " of " << count << " zeros, scan at x = " << x << ")";
      throw ScanFailure(os.str());
    }
    double h = step;
    if (last_spacing > 0.0) h = std::min(h, 0.25 * last_spacing);
    const double x2 = x + h;
    const double f2 = F_at(sf, x2);
    step *= options.growth;

    if (fx == 0.0 || (f2 != 0.0 && (f2 < 0.0) == (fx < 0.0))) {
      x = x2;
      fx = f2;
      continue;
    }
    const double root = f2 == 0.0 ? x2 : refine(sf, x, x2, fx, f2, options.refine_tol);
    const double dF = sf.eval_F_prime(root, kEvalTol).value;
    const double scale = std::max(std::fabs(fx), std::fabs(f2)) / (x2 - x);
    if (!(std::fabs(dF) > 1e-10 * scale)) {
      std::ostringstream os;
      os << "F'(" << root << ") = " << dF << " is negligible against the local scale " << scale
         << "; suspected multiple zero";
      throw Error(ErrorKind::derivative_vanishes, os.str());
    }
    last_spacing = zs.lambdas.empty() ? root : root - zs.lambdas.back();
    zs.lambdas.push_back(root);
    since_zero = 0;
    zs.F_prime.push_back(dF);
    zs.f_prime.push_back(std::exp(sf.nu() * std::log(root)) * dF);
    x = x2;
    fx = f2;
  }
  return zs;
}

SummabilityReport summability_diagnostic(const ZeroSet& zs) {
  const std::size_t n = zs.size();
  if (n < 5) throw Error(ErrorKind::insufficient_zeros, "summability diagnostic needs at least 5 zeros");
  SummabilityReport rep;
  rep.exponent = zs.params.power();

  // Later half of the zeros (at least 5 points) carries the asymptotic slope.
  const std::size_t first = std::min(n / 2, n - 5);
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < n; ++i) {
    xs.push_back(std::log(static_cast<double>(i + 1)));
    ys.push_back(std::log(zs.lambdas[i]));
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
  rep.slope = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (my + rep.slope * (xs[i] - mx));
    sse += e * e;
  }
  rep.slope_stderr = m > 2.0 ? std::sqrt(sse / (m - 2.0) / sxx) : 0.0;

  for (double lam : zs.lambdas) rep.partial_sum += std::pow(lam, -rep.exponent);
  const double decay = rep.exponent * rep.slope;
  rep.consistent = decay > 1.0;
  if (rep.consistent) {
    // sum_{j>n} t_n (j/n)^-decay ~ t_n n / (decay - 1)
    const double last = std::pow(zs.lambdas.back(), -rep.exponent);
    rep.tail_estimate = last * static_cast<double>(n) / (decay - 1.0);
  } else {
    rep.tail_estimate = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace jbessel
