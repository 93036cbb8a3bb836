#include "jbessel/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace jbessel {

std::string_view to_string(CoefficientSource s) {
  switch (s) {
    case CoefficientSource::recurrence: return "recurrence";
    case CoefficientSource::closed_form: return "closed_form";
    case CoefficientSource::hyperbessel: return "hyperbessel";
  }
  return "unknown";
}

double CoefficientTable::value(std::size_t n) const {
  // Early entries as ratio products, so c_1 is the stored ratio itself.
  if (n <= 32 && n < ratio.size()) {
    double v = 1.0;
    for (std::size_t i = 1; i <= n; ++i) v *= ratio[i];
    return v;
  }
  return sign.at(n) * std::exp(log_abs.at(n));
}

double CoefficientTable::perturbation_factor(std::size_t n) const {
  double f = 1.0;
  for (const auto& p : perturbations)
    if (p.index == n) f *= p.factor;
  return f;
}

CoefficientTable CoefficientTable::perturbed(std::size_t index, double factor) const {
  if (index == 0 || index > max_index() || !(factor != 0.0) || !std::isfinite(factor))
    throw Error(ErrorKind::invalid_argument, "perturbation index must be in [1, N] with a finite nonzero factor");
  CoefficientTable t = *this;
  t.perturbations.push_back({index, factor});
  t.log_abs[index] += std::log(std::fabs(factor));
  if (factor < 0) t.sign[index] = -t.sign[index];
  t.ratio[index] *= factor;
  if (index + 1 < t.ratio.size()) t.ratio[index + 1] /= factor;
  return t;
}

// ---------------------------------------------------------------------------
// Exact-identity ratio sequence (double and BigFloat).

template <class Real>
RatioSequence<Real>::RatioSequence(const ModelParams& params, Real proto)
    : params_(params), proto_(proto), log_rho_(lift(proto, 0.0)) {}

template <class Real>
Real RatioSequence<Real>::rho_after(std::size_t steps) {
  using std::log1p;
  const Real c = lift(proto_, params_.beta()) + 1.0;
  const Real mu = 2.0 * lift(proto_, params_.nu()) + params_.alpha() + 1.0;
  for (std::size_t i = 0; i < steps; ++i, ++m_) {
    // rho_{m+1} / rho_m = (mu+m) / (mu+c+m) = 1 - c/(mu+c+m)
    log_rho_ += log1p(-(c / (mu + c + static_cast<double>(m_))));
  }
  return log_rho_;
}

template <class Real>
Real RatioSequence<Real>::next() {
  using std::exp;
  using std::expm1;
  ++n_;
  const bool class_b = params_.cls() == FunctionClass::B;
  const std::size_t step = class_b ? 1 : 2;
  if (n_ == 1) {
    rho_after(step);
    return lift(proto_, class_b ? params_.a() : params_.a() / 2.0);
  }
  const Real c = lift(proto_, params_.beta()) + 1.0;
  const Real mu = 2.0 * lift(proto_, params_.nu()) + params_.alpha() + 1.0;
  const Real rho_prev = exp(log_rho_);
  const Real one_minus_rho = -expm1(rho_after(step));
  if (class_b) {
    const Real x = mu + static_cast<double>(n_ - 1);
    return params_.a() * c * rho_prev / ((x + c) * one_minus_rho);
  }
  const Real x = mu + static_cast<double>(2 * n_ - 2);
  return (params_.a() / 2.0) * c * (2.0 * x + c + 1.0) * rho_prev /
         ((x + c) * (x + c + 1.0) * one_minus_rho);
}

template class RatioSequence<double>;
template class RatioSequence<BigFloat>;

// ---------------------------------------------------------------------------

namespace {

// Sum of log1p(-c/(mu+c+i)) for i in [0, m): log of (mu)_m / (mu+c)_m.
double log_rho(double mu, double c, std::size_t m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) s += std::log1p(-c / (mu + c + static_cast<double>(i)));
  return s;
}

// B(x+step, c) - B(x, c). `rel` is |difference| / B(x, c), known in closed
// form; below 0.1 direct subtraction would lose a decimal digit.
double beta_step_difference(double x, double c, double step, double rel) {
  if (rel >= 0.1) return beta_fn(x + step, c) - beta_fn(x, c);
  return -beta_fn(x, c) * rel;
}

// B(mu+m, c) - B(mu, c) = -B(mu, c)(1 - rho_m).
double beta_span_difference(double mu, double c, std::size_t m) {
  const double one_minus_rho = -std::expm1(log_rho(mu, c, m));
  if (one_minus_rho >= 0.1) return beta_fn(mu + static_cast<double>(m), c) - beta_fn(mu, c);
  return -beta_fn(mu, c) * one_minus_rho;
}

CoefficientTable empty_table(const ModelParams& params, CoefficientSource source, std::size_t N) {
  CoefficientTable t{params, source, {}, {}, {}, {}};
  t.log_abs.reserve(N + 1);
  t.sign.reserve(N + 1);
  t.ratio.reserve(N + 1);
  t.log_abs.push_back(0.0);
  t.sign.push_back(1);
  t.ratio.push_back(1.0);
  return t;
}

void push_ratio(CoefficientTable& t, double r) {
  if (!std::isfinite(r)) throw Error(ErrorKind::internal_error, "non-finite coefficient ratio");
  t.ratio.push_back(r);
  t.log_abs.push_back(r == 0.0 ? -std::numeric_limits<double>::infinity()
                               : t.log_abs.back() + std::log(std::fabs(r)));
  t.sign.push_back(t.sign.back() * (r > 0 ? 1 : (r < 0 ? -1 : 0)));
}

// Fills ratio[] from log_abs/sign for the closed forms.
void push_log(CoefficientTable& t, double log_abs, int sign) {
  const double r = sign * t.sign.back() * std::exp(log_abs - t.log_abs.back());
  t.log_abs.push_back(log_abs);
  t.sign.push_back(sign);
  t.ratio.push_back(r);
}

void require_class(const ModelParams& p, FunctionClass cls, const char* op) {
  if (p.cls() != cls) {
    std::ostringstream os;
    os << op << " requires class " << to_string(cls);
    throw Error(ErrorKind::invalid_argument, os.str());
  }
}

}  // namespace

CoefficientTable class_b_recurrence(const ModelParams& params, std::size_t N) {
  require_class(params, FunctionClass::B, "class_b_recurrence");
  const double mu = params.mu();
  const double c = params.beta() + 1.0;
  CoefficientTable t = empty_table(params, CoefficientSource::recurrence, N);
  for (std::size_t n = 1; n <= N; ++n) {
    const double x = mu + static_cast<double>(n - 1);
    const double num = beta_step_difference(x, c, 1.0, c / (x + c));
    // At n = 1 numerator and denominator are the same difference.
    const double den = n == 1 ? num : beta_span_difference(mu, c, n);
    if (den == 0.0) throw Error(ErrorKind::internal_error, "Beta difference underflowed to zero");
    push_ratio(t, params.a() * num / den);
  }
  return t;
}

CoefficientTable class_b_closed_form(const ModelParams& params, std::size_t N) {
  require_class(params, FunctionClass::B, "class_b_closed_form");
  const double mu = params.mu();
  const double c = params.beta() + 1.0;
  const double log_ac = std::log(std::fabs(params.a() * c));
  const int sa = params.a() < 0 ? -1 : 1;
  CoefficientTable t = empty_table(params, CoefficientSource::closed_form, N);
  const double lg_mu = log_gamma(mu);
  double log_product = 0.0;
  int sign = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    // (mu)_n / [(mu+c)_n - (mu)_n] = rho_n / (1 - rho_n)
    const double lp_mu = log_pochhammer(mu, n);
    const double lp_muc = log_pochhammer(mu + c, n);
    const double diff = lp_muc + std::log(-std::expm1(lp_mu - lp_muc));
    log_product += lp_mu - diff;
    sign *= sa;
    const double la = static_cast<double>(n) * log_ac + lg_mu -
                      log_gamma(mu + static_cast<double>(n)) + log_product;
    push_log(t, la, sign);
  }
  return t;
}

CoefficientTable class_a_coeffs(const ModelParams& params, std::size_t N) {
  require_class(params, FunctionClass::A, "class_a_coeffs");
  const double mu = params.mu();
  const double c = params.beta() + 1.0;
  CoefficientTable t = empty_table(params, CoefficientSource::recurrence, N);
  for (std::size_t n = 1; n <= N; ++n) {
    const double x = mu + static_cast<double>(2 * n - 2);
    const double rel = c * (2.0 * x + c + 1.0) / ((x + c) * (x + c + 1.0));
    const double num = beta_step_difference(x, c, 2.0, rel);
    const double den = n == 1 ? num : beta_span_difference(mu, c, 2 * n);
    if (den == 0.0) throw Error(ErrorKind::internal_error, "Beta difference underflowed to zero");
    push_ratio(t, params.a() / 2.0 * num / den);
  }
  return t;
}

CoefficientTable class_a_closed_form(const ModelParams& params, std::size_t N) {
  require_class(params, FunctionClass::A, "class_a_closed_form");
  const double mu = params.mu();
  const double beta = params.beta();
  const double c = beta + 1.0;
  const double log_half_ac = std::log(std::fabs(params.a() * c / 2.0));
  const int sa = params.a() < 0 ? -1 : 1;
  CoefficientTable t = empty_table(params, CoefficientSource::closed_form, N);
  double la = 0.0;
  int sign = 1;
  for (std::size_t j = 1; j <= N; ++j) {
    const double lp_mu2 = log_pochhammer(mu, 2 * j);
    const double lp_muc2 = log_pochhammer(mu + c, 2 * j);
    const double den = lp_muc2 + std::log(-std::expm1(lp_mu2 - lp_muc2));
    la += log_half_ac + std::log(beta + 2.0 * (mu + 2.0 * static_cast<double>(j) - 1.0)) +
          log_pochhammer(mu, 2 * j - 2) - den;
    sign *= sa;
    push_log(t, la, sign);
  }
  return t;
}

// ---------------------------------------------------------------------------

double HyperbesselPolynomial::evaluate(double j) const {
  double r = 0.0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) r = r * j + *it;
  return r;
}

double HyperbesselPolynomial::evaluate_from_roots(double j) const {
  std::complex<double> p = 1.0;
  for (const auto& r : roots) p *= j - r;
  if (std::fabs(p.imag()) > 1e-10 * std::max(1.0, std::abs(p))) {
    std::ostringstream os;
    os << "P_k(" << j << ") has imaginary residue " << p.imag();
    throw Error(ErrorKind::internal_error, os.str());
  }
  return p.real();
}

HyperbesselPolynomial hyperbessel_polynomial(const ModelParams& params) {
  const double beta = params.beta();
  const double k_real = std::round(beta);
  if (std::fabs(beta - k_real) > 1e-9 || k_real < 0) {
    std::ostringstream os;
    os << "hyperbessel form needs integer beta, got " << beta;
    throw Error(ErrorKind::not_integer, os.str());
  }
  const int k = static_cast<int>(k_real);
  const double mu = params.mu();

  // Q(j) = prod_{i=0..k} (j + mu + i), ascending coefficients in j.
  std::vector<double> q{1.0};
  for (int i = 0; i <= k; ++i) {
    const double root_shift = mu + i;
    std::vector<double> next(q.size() + 1, 0.0);
    for (std::size_t d = 0; d < q.size(); ++d) {
      next[d] += q[d] * root_shift;
      next[d + 1] += q[d];
    }
    q = std::move(next);
  }
  const double poch = pochhammer(mu, static_cast<std::size_t>(k + 1));
  q[0] -= poch;
  if (std::fabs(q[0]) > 1e-12 * std::max(1.0, poch))
    throw Error(ErrorKind::internal_error, "Q(0) != 0 in hyperbessel polynomial");

  HyperbesselPolynomial P;
  P.k = k;
  P.mu = mu;
  P.coefficients.assign(q.begin() + 1, q.end());  // divide by j

  if (k > 0) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < k; ++i) companion(i, k - 1) = -P.coefficients[i];
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success)
      throw Error(ErrorKind::root_finding_failure, "companion eigensolve did not converge");
    const auto ev = solver.eigenvalues();
    for (int i = 0; i < k; ++i) P.roots.push_back(ev(i));
    std::sort(P.roots.begin(), P.roots.end(), [](auto x, auto y) {
      return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
  }
  return P;
}

HyperbesselTable hyperbessel_coeffs(const ModelParams& params, std::size_t N) {
  require_class(params, FunctionClass::B, "hyperbessel_coeffs");
  HyperbesselTable out{empty_table(params, CoefficientSource::hyperbessel, N),
                       hyperbessel_polynomial(params)};
  const auto& P = out.polynomial;
  const double mu = params.mu();
  const double scale = params.a() * (P.k + 1) * pochhammer(mu, static_cast<std::size_t>(P.k + 1));
  const double log_scale = std::log(std::fabs(scale));
  const int s = scale < 0 ? -1 : 1;
  const double lg_mu = log_gamma(mu);
  double log_p = 0.0;
  int sign = 1;
  for (std::size_t n = 1; n <= N; ++n) {
    const double pk = P.evaluate_from_roots(static_cast<double>(n));
    if (!(pk > 0.0)) {
      std::ostringstream os;
      os << "P_k(" << n << ") = " << pk << " is not positive";
      throw Error(ErrorKind::internal_error, os.str());
    }
    log_p += std::log(pk);
    sign *= s;
    const double nd = static_cast<double>(n);
    const double la = lg_mu + nd * log_scale - log_gamma(mu + nd) - log_gamma(nd + 1.0) - log_p;
    push_log(out.table, la, sign);
  }
  return out;
}

CoefficientTable make_table(const ModelParams& params, std::size_t N, CoefficientSource source) {
  const bool b = params.cls() == FunctionClass::B;
  switch (source) {
    case CoefficientSource::recurrence:
      return b ? class_b_recurrence(params, N) : class_a_coeffs(params, N);
    case CoefficientSource::closed_form:
      return b ? class_b_closed_form(params, N) : class_a_closed_form(params, N);
    case CoefficientSource::hyperbessel:
      return hyperbessel_coeffs(params, N).table;
  }
  throw Error(ErrorKind::invalid_argument, "unknown coefficient source");
}

}  // namespace jbessel
