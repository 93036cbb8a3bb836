// Thin RAII wrapper over an MPFR variable.
//
// Binary operations produce a result at the larger of the two operand
// precisions. Everything rounds to nearest.
#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <utility>

namespace jbessel {

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t bits = 64) {
    mpfr_init2(v_, bits);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(double x, mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_d(v_, x, MPFR_RNDN);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  /// log|x| without overflowing the double exponent range; -inf for zero.
  double log_abs() const;

  BigFloat& operator+=(const BigFloat& o) {
    mpfr_add(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(const BigFloat& o) {
    mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(const BigFloat& o) {
    mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(const BigFloat& o) {
    mpfr_div(v_, v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator+=(double o) {
    mpfr_add_d(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator-=(double o) {
    mpfr_sub_d(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator*=(double o) {
    mpfr_mul_d(v_, v_, o, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator/=(double o) {
    mpfr_div_d(v_, v_, o, MPFR_RNDN);
    return *this;
  }

  friend BigFloat operator-(const BigFloat& x) {
    BigFloat r(x.precision());
    mpfr_neg(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

#define JBESSEL_BIGFLOAT_BINOP(op, fn, fnd, dfn)                              \
  friend BigFloat operator op(const BigFloat& x, const BigFloat& y) {         \
    BigFloat r(std::max(x.precision(), y.precision()));                       \
    fn(r.v_, x.v_, y.v_, MPFR_RNDN);                                          \
    return r;                                                                 \
  }                                                                           \
  friend BigFloat operator op(const BigFloat& x, double y) {                  \
    BigFloat r(x.precision());                                                \
    fnd(r.v_, x.v_, y, MPFR_RNDN);                                            \
    return r;                                                                 \
  }                                                                           \
  friend BigFloat operator op(double x, const BigFloat& y) {                  \
    BigFloat r(y.precision());                                                \
    dfn(r.v_, x, y.v_, MPFR_RNDN);                                            \
    return r;                                                                 \
  }

  JBESSEL_BIGFLOAT_BINOP(+, mpfr_add, mpfr_add_d, add_d_rev)
  JBESSEL_BIGFLOAT_BINOP(-, mpfr_sub, mpfr_sub_d, mpfr_d_sub)
  JBESSEL_BIGFLOAT_BINOP(*, mpfr_mul, mpfr_mul_d, mul_d_rev)
  JBESSEL_BIGFLOAT_BINOP(/, mpfr_div, mpfr_div_d, mpfr_d_div)
#undef JBESSEL_BIGFLOAT_BINOP

  friend bool operator<(const BigFloat& x, const BigFloat& y) { return mpfr_less_p(x.v_, y.v_) != 0; }

  friend BigFloat log1p(const BigFloat& x) { return apply(mpfr_log1p, x); }
  friend BigFloat expm1(const BigFloat& x) { return apply(mpfr_expm1, x); }
  friend BigFloat log(const BigFloat& x) { return apply(mpfr_log, x); }
  friend BigFloat exp(const BigFloat& x) { return apply(mpfr_exp, x); }
  friend BigFloat abs(const BigFloat& x) { return apply(mpfr_abs, x); }

  mpfr_srcptr get() const { return v_; }
  mpfr_ptr get() { return v_; }

 private:
  static int add_d_rev(mpfr_ptr r, double x, mpfr_srcptr y, mpfr_rnd_t rnd) {
    return mpfr_add_d(r, y, x, rnd);
  }
  static int mul_d_rev(mpfr_ptr r, double x, mpfr_srcptr y, mpfr_rnd_t rnd) {
    return mpfr_mul_d(r, y, x, rnd);
  }
  static BigFloat apply(int (*fn)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), const BigFloat& x) {
    BigFloat r(x.precision());
    fn(r.v_, x.v_, MPFR_RNDN);
    return r;
  }

  mpfr_t v_;
};

/// Builds a constant at the precision of `proto`. Lets generic code written
/// against double also run on BigFloat.
inline double lift(double /*proto*/, double x) { return x; }
inline BigFloat lift(const BigFloat& proto, double x) { return BigFloat(x, proto.precision()); }

inline double log_abs(double x) { return std::log(std::fabs(x)); }
inline double log_abs(const BigFloat& x) { return x.log_abs(); }

inline double to_double(double x) { return x; }
inline double to_double(const BigFloat& x) { return x.to_double(); }

}  // namespace jbessel
