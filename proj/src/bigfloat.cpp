#include "jbessel/bigfloat.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace jbessel {

double BigFloat::log_abs() const {
  if (mpfr_zero_p(v_)) return -std::numeric_limits<double>::infinity();
  long exponent = 0;
  const double mantissa = mpfr_get_d_2exp(&exponent, v_, MPFR_RNDN);
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::numbers::ln2;
}

}  // namespace jbessel
