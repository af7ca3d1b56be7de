#pragma once

#include <gmpxx.h>

#include <string>

#include "qmoments/errors.hpp"

namespace qmoments {

// Exact arithmetic types.  mpq_class canonicalizes the result of every
// arithmetic operation, but NOT the two-argument constructor: mpq_class(32,
// 1000) stays 32/1000, and equality (mpq_equal) silently assumes canonical
// form.  Construct non-reduced fractions through rat_frac below.
using BigInt = mpz_class;
using BigRational = mpq_class;

// n/d reduced to canonical form.  The two-argument mpq_class constructor
// keeps the factors as given, which breaks equality comparisons.
inline BigRational rat_frac(long n, long d) {
  if (d == 0) throw pole_error("rat_frac: zero denominator");
  BigRational r(n, d);
  r.canonicalize();
  return r;
}

inline BigInt int_pow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

// x^e for integer e of either sign.  0^0 = 1; 0^negative is a pole.
inline BigRational rat_pow(const BigRational& x, long e) {
  if (e == 0) return BigRational(1);
  if (x == 0 && e < 0) throw pole_error("rat_pow: zero base with negative exponent");
  const unsigned long a = static_cast<unsigned long>(e < 0 ? -e : e);
  BigRational r;
  mpz_pow_ui(mpq_numref(r.get_mpq_t()), mpq_numref(x.get_mpq_t()), a);
  mpz_pow_ui(mpq_denref(r.get_mpq_t()), mpq_denref(x.get_mpq_t()), a);
  // numerator/denominator of x are coprime, so their powers are too: the
  // result is already canonical except for the sign convention on inversion.
  if (e < 0) {
    mpq_inv(r.get_mpq_t(), r.get_mpq_t());
  }
  return r;
}

inline BigRational rat_abs(const BigRational& x) { return x < 0 ? BigRational(-x) : x; }

// Parse a plain or scientific decimal literal ("-0.125", "3.2e-58", "7") into
// the exact rational it denotes.  Used when reading our own serialized output
// back; rejects anything else.
BigRational parse_decimal(const std::string& text);

}  // namespace qmoments
