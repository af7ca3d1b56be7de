#pragma once

#include <mpfr.h>

#include <string>

#include "qmoments/errors.hpp"
#include "qmoments/rational.hpp"

namespace qmoments {

// Working precision (bits) used when a Ball is created without an explicit
// precision.  192 bits unless overridden; the CLI maps its --digits /
// environment settings through set_default_precision.
mpfr_prec_t default_precision();
void set_default_precision(mpfr_prec_t bits);

// A certified enclosure of a real number, stored as MPFR lower/upper
// endpoints.  Every operation rounds the lower endpoint down and the upper
// endpoint up, so the true value of any expression stays inside the result.
// Midpoint/radius are derived views used for reporting; endpoint comparisons
// (mpfr_cmp and friends) are exact, which is what the certification logic
// leans on throughout.
//
// Only what the project needs is implemented: field operations, integer
// powers, square roots, absolute value, and order predicates.  There are no
// transcendental functions anywhere in the pipeline.
class Ball {
 public:
  Ball();                            // [0, 0] at default precision
  explicit Ball(mpfr_prec_t prec);   // [0, 0] at the given precision
  Ball(const Ball& o);
  Ball(Ball&& o) noexcept;
  Ball& operator=(const Ball& o);
  Ball& operator=(Ball&& o) noexcept;
  ~Ball();

  // prec == 0 means "use default_precision()".
  static Ball exact(long v, mpfr_prec_t prec = 0);
  static Ball exact(const BigRational& v, mpfr_prec_t prec = 0);
  static Ball from_endpoints(const BigRational& lo, const BigRational& hi,
                             mpfr_prec_t prec = 0);

  mpfr_prec_t precision() const { return prec_; }
  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }

  // Endpoints are binary floats, hence exactly representable as rationals.
  BigRational lower_rational() const;
  BigRational upper_rational() const;

  // Midpoint rounded to nearest at this ball's precision; it always lies
  // inside [lo, hi].  radius_upper_rational() is an exact upper bound on the
  // distance from that midpoint to either endpoint.
  BigRational midpoint_rational() const;
  BigRational radius_upper_rational() const;
  double midpoint_double() const;  // RNDN, for plotting / python convenience
  double radius_double() const;    // RNDU

  bool is_exact() const;  // lo == hi
  bool contains_zero() const;
  bool contains(const BigRational& v) const;
  bool contains_ball(const Ball& o) const;           // o  subset of  this
  bool interior_contains(const Ball& o) const;       // strict inclusion
  bool is_positive() const;                          // certified lo > 0
  bool is_negative() const;                          // certified hi < 0
  int certified_sign() const;                        // +1 / -1 / 0 = straddles

  bool strictly_less(const Ball& o) const;           // hi < o.lo
  bool strictly_less(const BigRational& v) const;    // hi < v
  bool strictly_greater(const BigRational& v) const; // lo > v
  bool overlaps(const Ball& o) const;

  Ball operator-() const;
  Ball recip() const;               // pole_error if the enclosure meets 0
  Ball sqrt() const;                // domain_error if lo < 0
  Ball pow(unsigned long k) const;
  Ball abs() const;

  // Enclosure with the radius enlarged by `margin` on both sides; used to
  // absorb certified tail bounds of truncated series/products.
  Ball padded(const BigRational& margin) const;

  // Outward re-rounding to a different precision.
  Ball rounded(mpfr_prec_t prec) const;

  // Debug formatting "mid +- rad"; the CLI's serialization lives in io.hpp.
  std::string brief(size_t digits = 12) const;

  friend Ball operator+(const Ball& a, const Ball& b);
  friend Ball operator-(const Ball& a, const Ball& b);
  friend Ball operator*(const Ball& a, const Ball& b);
  friend Ball operator/(const Ball& a, const Ball& b);

 private:
  mpfr_t lo_;
  mpfr_t hi_;
  mpfr_prec_t prec_;

  void assert_valid() const;
};

Ball operator+(const Ball& a, const BigRational& b);
Ball operator-(const Ball& a, const BigRational& b);
Ball operator-(const BigRational& a, const Ball& b);
Ball operator*(const Ball& a, const BigRational& b);
Ball operator/(const Ball& a, const BigRational& b);
Ball operator*(const Ball& a, long b);

}  // namespace qmoments
