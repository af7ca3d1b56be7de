#pragma once

#include <vector>

#include "qmoments/ball.hpp"
#include "qmoments/qseries.hpp"
#include "qmoments/rational.hpp"

namespace qmoments {

// An isolating interval (lo, hi) for one root, with the exactly-evaluated
// polynomial signs at the endpoints.  index is 1-based: the j-th positive
// root in increasing order.
struct RootBracket {
  BigRational lo;
  BigRational hi;
  int sign_lo = 0;
  int sign_hi = 0;
  int index = 0;
};

// A root enclosure whose width is certified, together with the bracket it was
// refined from.  If bisection lands exactly on the root (possible when the
// root is rational, e.g. degree 1), the enclosure is a point.
struct CertifiedRoot {
  Ball value;
  int index = 0;
  RootBracket bracket;
};

// Exact sign of the truncated q-exponential at a rational point, computed by
// clearing denominators: with integer q, the rescaled coefficients
// (q; q)_n / (q; q)_k are integers, so the sign test is pure integer
// arithmetic (then corrected by the sign (-1)^n of (q; q)_n).
int sign_at(const QPolynomial& poly, const BigRational& x);

// Isolating brackets (p^{2j-1}, p^{2j+1}), j = 1..n, for the n positive roots
// of the degree-n truncation with q = p^2.  Verifies the strict sign
// alternation at the half-odd powers q^{k+1/2} = p^{2k+1} and raises
// consistency_error if it ever fails.
std::vector<RootBracket> bracket_roots(const QPolynomial& poly, long p);

// Bisection with exact sign tests until the enclosure width drops below
// 2^{-prec} * max(1, lo), where lo is the initial bracket's lower endpoint
// (a lower bound for the root's magnitude).
CertifiedRoot refine_root(const QPolynomial& poly, const RootBracket& bracket,
                          mpfr_prec_t prec = 0);

// Convenience pipeline: truncation for q = p^2 at degree n, bracket, refine.
// Roots come back in increasing order with certified pairwise separation.
std::vector<CertifiedRoot> roots_all(long p, int n, mpfr_prec_t prec = 0);

}  // namespace qmoments
