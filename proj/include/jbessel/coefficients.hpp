// Series coefficients c_0..c_N of the entire factor F, normalized so c_0 = 1.
//
// Class B: F(z) = sum c_n z^n.  Class A: F(z) = sum c_n z^(2n), entry n
// holds the coefficient of z^(2n). Coefficients decay super-exponentially
// (|c_n/c_{n-1}| = O(n^-(beta+2))), so a table stores log|c_n| and sign(c_n)
// rather than the values themselves, which leave the double range quickly.
#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "jbessel/bigfloat.hpp"
#include "jbessel/core_math.hpp"

namespace jbessel {

enum class CoefficientSource { recurrence, closed_form, hyperbessel };

std::string_view to_string(CoefficientSource s);

/// Multiplies c_index by factor. Used to build corrupted fixtures that the
/// verification checks must reject.
struct Perturbation {
  std::size_t index;
  double factor;
};

struct CoefficientTable {
  ModelParams params;
  CoefficientSource source = CoefficientSource::recurrence;
  std::vector<double> log_abs;  ///< log|c_n|
  std::vector<int> sign;        ///< sign(c_n), in {-1, 0, +1}
  std::vector<double> ratio;    ///< c_n / c_{n-1}; ratio[0] is 1 by convention
  std::vector<Perturbation> perturbations;

  std::size_t max_index() const { return log_abs.empty() ? 0 : log_abs.size() - 1; }
  std::size_t size() const { return log_abs.size(); }

  /// c_n as a double (product of ratios up to n = 32); underflows to 0 for
  /// deep entries.
  double value(std::size_t n) const;

  /// Product of all perturbation factors registered at index n.
  double perturbation_factor(std::size_t n) const;

  /// Copy with c_index scaled by factor (ratios at index and index+1 adjusted).
  CoefficientTable perturbed(std::size_t index, double factor) const;
};

/// Class B coefficients from the Beta-difference recurrence
///   c_n = a c_{n-1} [B(mu+n,beta+1) - B(mu+n-1,beta+1)] / [B(mu+n,beta+1) - B(mu,beta+1)].
/// Differences are taken directly unless they cancel more than one decimal
/// digit, in which case a factored form is used.
CoefficientTable class_b_recurrence(const ModelParams& params, std::size_t N);

/// Class B coefficients from the Pochhammer closed form, renormalized so
/// c_0 = 1 (i.e. multiplied by Gamma(mu)).
CoefficientTable class_b_closed_form(const ModelParams& params, std::size_t N);

/// Class A coefficients from the Beta-difference recurrence with step 2.
CoefficientTable class_a_coeffs(const ModelParams& params, std::size_t N);

/// Class A coefficients from the Pochhammer closed form
///   c_n = (a(beta+1)/2)^n prod_j (beta + 2(mu+2j-1)) (mu)_{2j-2} / [(mu+beta+1)_{2j} - (mu)_{2j}].
CoefficientTable class_a_closed_form(const ModelParams& params, std::size_t N);

/// P_k(j) = [prod_{i=0..k} (mu+j+i) - (mu)_{k+1}] / j together with its
/// roots alpha_1..alpha_k.
struct HyperbesselPolynomial {
  int k = 0;
  double mu = 0.0;
  std::vector<double> coefficients;  ///< monic, ascending powers of j; size k+1
  std::vector<std::complex<double>> roots;

  /// prod_i (j - alpha_i) in complex arithmetic. Throws internal_error if the
  /// imaginary residue exceeds 1e-10 relative.
  double evaluate_from_roots(double j) const;

  /// Direct evaluation of the real polynomial (Horner).
  double evaluate(double j) const;
};

/// Builds P_k for integer beta = k and mu. Throws NotInteger if beta is not
/// within 1e-9 of a nonnegative integer, RootFindingFailure when the
/// companion eigensolve fails.
HyperbesselPolynomial hyperbessel_polynomial(const ModelParams& params);

struct HyperbesselTable {
  CoefficientTable table;
  HyperbesselPolynomial polynomial;
};

/// Class B coefficients at integer beta = k via the 0F_{k+1} product form
///   c_n = Gamma(mu) (a(k+1)(mu)_{k+1})^n / (Gamma(mu+n) n!) prod_j 1/P_k(j).
HyperbesselTable hyperbessel_coeffs(const ModelParams& params, std::size_t N);

/// Builds a table for params.cls() by the requested route.
CoefficientTable make_table(const ModelParams& params, std::size_t N,
                            CoefficientSource source = CoefficientSource::recurrence);

/// Successive ratios r_n = c_n / c_{n-1} (n = 1, 2, ...) from exact Beta
/// identities that involve only rational functions of mu and beta:
///
///   class B: r_n = a (beta+1) rho_{n-1} / ((mu+n+beta) (1 - rho_n)),
///   class A: r_n = (a/2) (beta+1)(2x+beta+2) rho_{2n-2} / ((x+beta+1)(x+beta+2)(1 - rho_{2n})),
///            x = mu+2n-2,
///
/// with rho_m = B(mu+m, beta+1) / B(mu, beta+1) = (mu)_m / (mu+beta+1)_m.
/// r_1 is exactly a (class B) or a/2 (class A). Instantiated for double and
/// BigFloat, so the same sequence is available at any working precision.
template <class Real>
class RatioSequence {
 public:
  RatioSequence(const ModelParams& params, Real proto);

  /// Returns r_n for the next n, starting at n = 1.
  Real next();

  std::size_t index() const { return n_; }

 private:
  Real rho_after(std::size_t steps);  // advance log rho by `steps` factors

  ModelParams params_;
  Real proto_;
  Real log_rho_;  // log rho_m for m = m_
  std::size_t m_ = 0;
  std::size_t n_ = 0;
};

extern template class RatioSequence<double>;
extern template class RatioSequence<BigFloat>;

}  // namespace jbessel
