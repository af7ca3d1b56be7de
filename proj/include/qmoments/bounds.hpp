#pragma once

#include <optional>
#include <vector>

#include "qmoments/ball.hpp"
#include "qmoments/momentmatch.hpp"

namespace qmoments {

// Report for the root-bound and coefficient-inequality checks.  Pass flags
// come exclusively from certified ball comparisons; a false flag is evidence
// against the underlying claim, not an exception.
struct BoundReport {
  long p = 0;
  int n = 0;

  // Scaled roots r_{n,j} q^{-j} against [min(1, c_k), max(1, c_k)], k = n+1-j.
  struct RootRow {
    int j = 0;
    int k = 0;
    Ball ratio;
    BigRational ck;
    bool pass = false;
    // Surrogate for the asymptotic closeness claim, only meaningful for
    // k >= 2: |ratio - 1| <= 5 q^{-binom(k+1,2)}.
    bool near_one_pass = true;
  };
  std::vector<RootRow> root_rows;

  // Per-term refined inequality |a_j - p^{-j}| < 2 / p^{j+4k-2}.
  struct TermRow {
    int j = 0;
    int k = 0;
    Ball deviation;
    BigRational bound;
    bool pass = false;
  };
  std::vector<TermRow> term_rows;

  // Summary inequality sum_j |a_j - p^{-j}| < 1/(p^n (p-1)).
  Ball sum;
  BigRational sum_bound;
  bool sum_pass = false;

  bool all_pass() const;
};

// Bracketing constant: 1 - 2/q for k = 1, 1 + (-1)^k 4 q^{-binom(k+1,2)} for
// k > 1.  Requires q >= 4, k >= 1.
BigRational c_k(const BigRational& q, int k);

// Certifies r_{n,j} q^{-j} in [min(1, c_k), max(1, c_k)] for every j.
BoundReport root_bound_check(long p, int n, mpfr_prec_t precision = 0);

// Certifies the coefficient inequality (summary + per-term rows) for a
// uniform-base CoefficientSet.
BoundReport theorem_inequality_check(const CoefficientSet& cs);

// h_{q,k} = (-1)^{k+1} (1 - c_k) q^{binom(k+1,2)} c_k^{-k-1} /
//           ((c_k^{-1}; q)_{-inf} (c_k; q)_{-inf} G_{q,inf}(c_k q^{-k-1})),
// the quantity whose excess over 1 drives the root-pinning argument.
Ball h_qk(const BigRational& q, int k, mpfr_prec_t precision = 0);

// Exact rational lower-bound variants: closed forms for k = 1, 2 and the
// product form with c_k for k > 2.  Requires q > 2 for k <= 2 (denominators),
// q >= 4 otherwise.
BigRational h_hat(const BigRational& q, int k);

// Locates the q where h_hat(., k) crosses 1 inside [lo, hi] by exact-sign
// bisection; returns the final bracket.  Requires a sign change across the
// input interval.
std::pair<BigRational, BigRational> h_hat_unit_crossing(int k, const BigRational& lo,
                                                        const BigRational& hi,
                                                        const BigRational& width);

// Solves h(c) = 1 (c replacing c_k in the h_{q,k} formula) in the range
// (q^{-1/2}, q^{1/2}) by certified bisection on the side of 1 given by the
// parity of k.  Returns nullopt when no certified sign change is found.
std::optional<Ball> refined_c_k(const BigRational& q, int k, mpfr_prec_t precision = 0);

// Scaled root sequence c_{n,k} = r_{n, n+1-k} q^{-(n+1-k)} for n = k..n_max,
// certified strictly monotone in n (direction recorded: +1 increasing,
// -1 decreasing).  Overlapping consecutive balls raise precision_error.
struct MonotonicityReport {
  long p = 0;
  int k = 0;
  std::vector<Ball> values;  // indexed by n = k..n_max
  int direction = 0;
  bool monotone = false;
};
MonotonicityReport monotonicity_check(long p, int k, int n_max, mpfr_prec_t precision = 0);

}  // namespace qmoments
