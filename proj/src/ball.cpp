#include "qmoments/ball.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <utility>
#include <vector>

namespace qmoments {

namespace {

std::atomic<mpfr_prec_t> g_default_precision{192};

mpfr_prec_t resolve(mpfr_prec_t prec) { return prec > 0 ? prec : default_precision(); }

BigRational mpfr_to_rational(mpfr_srcptr x) {
  BigRational r;
  mpfr_get_q(r.get_mpq_t(), x);
  return r;
}

}  // namespace

mpfr_prec_t default_precision() { return g_default_precision.load(); }

void set_default_precision(mpfr_prec_t bits) {
  g_default_precision.store(std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN + 2));
}

Ball::Ball() : Ball(default_precision()) {}

Ball::Ball(mpfr_prec_t prec) : prec_(std::max<mpfr_prec_t>(prec, MPFR_PREC_MIN + 2)) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Ball::Ball(const Ball& o) : prec_(o.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, o.lo_, MPFR_RNDD);
  mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Ball::Ball(Ball&& o) noexcept : prec_(o.prec_) {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, o.lo_);
  mpfr_swap(hi_, o.hi_);
}

Ball& Ball::operator=(const Ball& o) {
  if (this != &o) {
    mpfr_set_prec(lo_, o.prec_);
    mpfr_set_prec(hi_, o.prec_);
    prec_ = o.prec_;
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }
  return *this;
}

Ball& Ball::operator=(Ball&& o) noexcept {
  if (this != &o) {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
  }
  return *this;
}

Ball::~Ball() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

void Ball::assert_valid() const {
  if (mpfr_nan_p(lo_) || mpfr_nan_p(hi_) || mpfr_cmp(lo_, hi_) > 0) {
    throw error("ball invariant violated (lo > hi or NaN endpoint)");
  }
}

Ball Ball::exact(long v, mpfr_prec_t prec) {
  Ball r(resolve(prec));
  mpfr_set_si(r.lo_, v, MPFR_RNDD);
  mpfr_set_si(r.hi_, v, MPFR_RNDU);
  return r;
}

Ball Ball::exact(const BigRational& v, mpfr_prec_t prec) {
  Ball r(resolve(prec));
  mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
  return r;
}

Ball Ball::from_endpoints(const BigRational& lo, const BigRational& hi, mpfr_prec_t prec) {
  if (lo > hi) throw domain_error("from_endpoints: lo > hi");
  Ball r(resolve(prec));
  mpfr_set_q(r.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(r.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return r;
}

BigRational Ball::lower_rational() const { return mpfr_to_rational(lo_); }
BigRational Ball::upper_rational() const { return mpfr_to_rational(hi_); }

BigRational Ball::midpoint_rational() const {
  // RNDN(lo + hi) stays within [2 lo, 2 hi] (both representable), so after
  // the exact halving the midpoint lies inside the enclosure.
  mpfr_t m;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  BigRational r = mpfr_to_rational(m);
  mpfr_clear(m);
  return r;
}

BigRational Ball::radius_upper_rational() const {
  const BigRational mid = midpoint_rational();
  const BigRational d1 = mid - lower_rational();
  const BigRational d2 = upper_rational() - mid;
  return std::max(d1, d2);
}

double Ball::midpoint_double() const {
  mpfr_t m;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  const double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Ball::radius_double() const {
  mpfr_t m, r1, r2;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  mpfr_init2(r1, 53);
  mpfr_init2(r2, 53);
  mpfr_sub(r1, m, lo_, MPFR_RNDU);
  mpfr_sub(r2, hi_, m, MPFR_RNDU);
  const double d = std::max(mpfr_get_d(r1, MPFR_RNDU), mpfr_get_d(r2, MPFR_RNDU));
  mpfr_clear(m);
  mpfr_clear(r1);
  mpfr_clear(r2);
  return d;
}

bool Ball::is_exact() const { return mpfr_equal_p(lo_, hi_); }

bool Ball::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Ball::contains(const BigRational& v) const {
  return mpfr_cmp_q(lo_, v.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, v.get_mpq_t()) >= 0;
}

bool Ball::contains_ball(const Ball& o) const {
  return mpfr_lessequal_p(lo_, o.lo_) && mpfr_lessequal_p(o.hi_, hi_);
}

bool Ball::interior_contains(const Ball& o) const {
  return mpfr_less_p(lo_, o.lo_) && mpfr_less_p(o.hi_, hi_);
}

bool Ball::is_positive() const { return mpfr_sgn(lo_) > 0; }
bool Ball::is_negative() const { return mpfr_sgn(hi_) < 0; }

int Ball::certified_sign() const {
  if (is_positive()) return 1;
  if (is_negative()) return -1;
  return 0;
}

bool Ball::strictly_less(const Ball& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }

bool Ball::strictly_less(const BigRational& v) const {
  return mpfr_cmp_q(hi_, v.get_mpq_t()) < 0;
}

bool Ball::strictly_greater(const BigRational& v) const {
  return mpfr_cmp_q(lo_, v.get_mpq_t()) > 0;
}

bool Ball::overlaps(const Ball& o) const {
  return mpfr_cmp(hi_, o.lo_) >= 0 && mpfr_cmp(o.hi_, lo_) >= 0;
}

Ball Ball::operator-() const {
  Ball r(prec_);
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);  // sign flips are exact
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Ball operator+(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec_, b.prec_));
  mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  r.assert_valid();
  return r;
}

Ball operator-(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec_, b.prec_));
  mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
  mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
  r.assert_valid();
  return r;
}

Ball operator*(const Ball& a, const Ball& b) {
  Ball r(std::max(a.prec_, b.prec_));
  // Lower endpoint: min of the four endpoint products rounded down; upper:
  // max rounded up.  Eight directed multiplies; no sign-case cleverness.
  mpfr_t t;
  mpfr_init2(t, r.prec_);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto* x : as) {
    for (auto* y : bs) {
      mpfr_mul(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_mul(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  r.assert_valid();
  return r;
}

Ball operator/(const Ball& a, const Ball& b) {
  if (b.contains_zero()) {
    if (b.is_exact()) throw pole_error("ball division by exact zero");
    throw precision_error("ball division: divisor enclosure contains zero");
  }
  Ball r(std::max(a.prec_, b.prec_));
  mpfr_t t;
  mpfr_init2(t, r.prec_);
  mpfr_srcptr as[2] = {a.lo_, a.hi_};
  mpfr_srcptr bs[2] = {b.lo_, b.hi_};
  bool first = true;
  for (auto* x : as) {
    for (auto* y : bs) {
      mpfr_div(t, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
      mpfr_div(t, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_clear(t);
  r.assert_valid();
  return r;
}

Ball Ball::recip() const { return Ball::exact(1L, prec_) / *this; }

Ball Ball::sqrt() const {
  if (mpfr_sgn(lo_) < 0) throw domain_error("ball sqrt of enclosure with negative part");
  Ball r(prec_);
  mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
  mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
  r.assert_valid();
  return r;
}

Ball Ball::pow(unsigned long k) const {
  if (k == 0) return Ball::exact(1L, prec_);
  if (k == 1) return *this;
  Ball r(prec_);
  const bool odd = (k % 2) != 0;
  if (odd || mpfr_sgn(lo_) >= 0) {
    // x^k is monotone increasing here (odd k everywhere, even k on x >= 0).
    mpfr_pow_ui(r.lo_, lo_, k, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, hi_, k, MPFR_RNDU);
  } else if (mpfr_sgn(hi_) <= 0) {
    // Even k on x <= 0: decreasing.
    mpfr_pow_ui(r.lo_, hi_, k, MPFR_RNDD);
    mpfr_pow_ui(r.hi_, lo_, k, MPFR_RNDU);
  } else {
    // Even k straddling zero: [0, max(|lo|, |hi|)^k].
    mpfr_set_zero(r.lo_, 1);
    mpfr_t m;
    mpfr_init2(m, prec_);
    mpfr_neg(m, lo_, MPFR_RNDU);
    if (mpfr_cmp(m, hi_) < 0) mpfr_set(m, hi_, MPFR_RNDU);
    mpfr_pow_ui(r.hi_, m, k, MPFR_RNDU);
    mpfr_clear(m);
  }
  r.assert_valid();
  return r;
}

Ball Ball::abs() const {
  if (mpfr_sgn(lo_) >= 0) return *this;
  if (mpfr_sgn(hi_) <= 0) return -*this;
  Ball r(prec_);
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  if (mpfr_cmp(r.hi_, hi_) < 0) mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

Ball Ball::padded(const BigRational& margin) const {
  if (margin < 0) throw domain_error("padded: negative margin");
  Ball r(prec_);
  mpfr_sub_q(r.lo_, lo_, margin.get_mpq_t(), MPFR_RNDD);
  mpfr_add_q(r.hi_, hi_, margin.get_mpq_t(), MPFR_RNDU);
  return r;
}

Ball Ball::rounded(mpfr_prec_t prec) const {
  Ball r(resolve(prec));
  mpfr_set(r.lo_, lo_, MPFR_RNDD);
  mpfr_set(r.hi_, hi_, MPFR_RNDU);
  return r;
}

std::string Ball::brief(size_t digits) const {
  mpfr_t m, r1, r2;
  mpfr_init2(m, prec_);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  mpfr_init2(r1, 53);
  mpfr_init2(r2, 53);
  mpfr_sub(r1, m, lo_, MPFR_RNDU);
  mpfr_sub(r2, hi_, m, MPFR_RNDU);
  if (mpfr_cmp(r2, r1) > 0) mpfr_set(r1, r2, MPFR_RNDU);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg +- %.2Rg", static_cast<int>(digits), m, r1);
  std::string out = s ? s : "?";
  mpfr_free_str(s);
  mpfr_clear(m);
  mpfr_clear(r1);
  mpfr_clear(r2);
  return out;
}

Ball operator+(const Ball& a, const BigRational& b) {
  return a + Ball::exact(b, a.precision());
}

Ball operator-(const Ball& a, const BigRational& b) {
  return a - Ball::exact(b, a.precision());
}

Ball operator-(const BigRational& a, const Ball& b) {
  return Ball::exact(a, b.precision()) - b;
}

Ball operator*(const Ball& a, const BigRational& b) {
  return a * Ball::exact(b, a.precision());
}

Ball operator/(const Ball& a, const BigRational& b) {
  if (b == 0) throw pole_error("ball division by exact zero");
  return a * Ball::exact(BigRational(1) / b, a.precision());
}

Ball operator*(const Ball& a, long b) { return a * Ball::exact(b, a.precision()); }

}  // namespace qmoments
