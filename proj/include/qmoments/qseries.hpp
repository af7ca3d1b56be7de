#pragma once

#include <vector>

#include "qmoments/ball.hpp"
#include "qmoments/rational.hpp"

namespace qmoments {

// The degree-n truncation of the q-exponential series: coefficient of x^k is
// 1/(q; q)_k, with the coefficients stored exactly.  Consecutive coefficients
// satisfy coeffs[k] = coeffs[k-1] / (1 - q^k), which construction maintains
// and tests re-check.
struct QPolynomial {
  BigRational q;
  std::vector<BigRational> coeffs;  // index k = 0 .. degree

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// (a; q)_k.  For k >= 0 this is the finite product over 1 - a q^j,
// j = 0 .. k-1.  For k < 0 it is 1 / prod_{j=1..-k} (1 - a q^{-j}); a pole is
// raised if any of those factors vanishes.  Requires q != 0 (and the inverse
// powers make sense for any nonzero rational q).
BigRational q_pochhammer(const BigRational& a, const BigRational& q, long k);

// (a; q)_{-infinity} = prod_{j>=1} 1 / (1 - a q^{-j}) for q > 1 and a < q.
// Finitely many factors are multiplied in ball arithmetic and the rest are
// absorbed into a certified tail enclosure [1 - S, 1/(1 - S)] with
// S >= sum_{j>J} |a| q^{-j}.
Ball q_pochhammer_inf(const Ball& a, const BigRational& q, mpfr_prec_t prec = 0);
Ball q_pochhammer_inf(const BigRational& a, const BigRational& q, mpfr_prec_t prec = 0);

// Coefficient list of the degree-n truncation, built by the exact ratio
// recurrence.  Requires q > 1 (so no coefficient denominator vanishes) and
// n >= 0.
QPolynomial truncated_q_exponential(const BigRational& q, int n);

// Exact Horner evaluation.
BigRational eval_exact(const QPolynomial& poly, const BigRational& x);

// Certified enclosure of the series tail sum_{k>n} x^k/(q; q)_k, i.e. the
// full q-exponential minus its degree-n truncation.  Terms are generated by
// the same ratio recurrence; the remainder after the last computed term is
// dominated by a geometric series and folded into the radius.
Ball tail_series(const BigRational& q, int n, const Ball& x, mpfr_prec_t prec = 0);

// The entire-function limit F_q(x) = prod_{j>=1} (1 - q^{-j} x), again with a
// certified multiplicative tail.  Requires q > 1; x may be any real ball.
Ball f_q_product(const BigRational& q, const Ball& x, mpfr_prec_t prec = 0);

// G_{q,inf}(t) = (1; q)_{-inf} * sum_{l>=0} (-t)^l q^{-l(l-1)/2} for
// 0 < t < 1.  The series alternates with strictly decreasing terms, so the
// first omitted term bounds the truncation error.
Ball g_inf(const BigRational& q, const Ball& t, mpfr_prec_t prec = 0);

// Same truncation built through the backwards product recurrence
// F_n(x) = (1 - x/q) F_{n-1}(x/q) + x^n / (q^n (q; q)_n), exercised as an
// independent route to the coefficients.
QPolynomial poly_via_recurrence(const BigRational& q, int n);

}  // namespace qmoments
