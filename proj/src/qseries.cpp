#include "qmoments/qseries.hpp"

#include <algorithm>

namespace qmoments {

namespace {

mpfr_prec_t resolve(mpfr_prec_t prec) { return prec > 0 ? prec : default_precision(); }

// 2^{-e} as an exact rational, used for truncation thresholds.
BigRational pow2_neg(unsigned long e) {
  BigRational r(1);
  mpz_mul_2exp(mpq_denref(r.get_mpq_t()), mpq_denref(r.get_mpq_t()), e);
  return r;
}

constexpr long kMaxSeriesTerms = 1000000;

}  // namespace

BigRational q_pochhammer(const BigRational& a, const BigRational& q, long k) {
  if (q == 0) throw domain_error("q_pochhammer: q must be nonzero");
  BigRational result(1);
  if (k >= 0) {
    BigRational qpow(1);  // q^j
    for (long j = 0; j < k; ++j) {
      result *= BigRational(1) - a * qpow;
      qpow *= q;
    }
    return result;
  }
  BigRational qpow(1);
  for (long j = 1; j <= -k; ++j) {
    qpow *= q;  // q^j
    const BigRational factor = BigRational(1) - a / qpow;
    if (factor == 0) {
      throw pole_error("q_pochhammer: vanishing factor 1 - a q^{-j} at negative index");
    }
    result *= factor;
  }
  return BigRational(1) / result;
}

Ball q_pochhammer_inf(const Ball& a, const BigRational& q, mpfr_prec_t prec) {
  const mpfr_prec_t out = resolve(prec);
  const mpfr_prec_t work = out + 32;
  if (q <= 1) throw domain_error("q_pochhammer_inf: requires q > 1");
  if (mpfr_cmp_q(a.upper(), q.get_mpq_t()) >= 0) {
    throw pole_error("q_pochhammer_inf: requires a < q (factor 1 - a/q would vanish or flip sign)");
  }

  // |a| <= A, so the factors skipped beyond J satisfy
  // sum_{j>J} |a| q^{-j} = A q^{-J} / (q - 1) = S, and the skipped part of
  // the product lies in [1 - S, 1/(1 - S)].
  const BigRational A = std::max(rat_abs(a.lower_rational()), rat_abs(a.upper_rational()));
  const BigRational threshold = pow2_neg(static_cast<unsigned long>(work + 8));
  BigRational S = A / (q - 1);
  long J = 1;
  S /= q;
  while (S > threshold) {
    S /= q;
    if (++J > kMaxSeriesTerms) {
      throw precision_error("q_pochhammer_inf: tail does not shrink fast enough");
    }
  }

  Ball product = Ball::exact(1L, work);
  const Ball aw = a.rounded(work);
  BigRational qpow(1);
  for (long j = 1; j <= J; ++j) {
    qpow *= q;
    const Ball factor = BigRational(1) - aw * (BigRational(1) / qpow);
    if (!factor.is_positive()) {
      throw precision_error("q_pochhammer_inf: factor enclosure not certified positive");
    }
    product = product / factor;
  }
  const Ball tail =
      Ball::from_endpoints(BigRational(1) - S, BigRational(1) / (BigRational(1) - S), work);
  return (product * tail).rounded(out);
}

Ball q_pochhammer_inf(const BigRational& a, const BigRational& q, mpfr_prec_t prec) {
  return q_pochhammer_inf(Ball::exact(a, resolve(prec) + 32), q, prec);
}

QPolynomial truncated_q_exponential(const BigRational& q, int n) {
  if (q <= 1) throw domain_error("truncated_q_exponential: requires q > 1");
  if (n < 0) throw domain_error("truncated_q_exponential: requires n >= 0");
  QPolynomial poly;
  poly.q = q;
  poly.coeffs.reserve(static_cast<size_t>(n) + 1);
  poly.coeffs.emplace_back(1);
  BigRational qpow(1);
  for (int k = 1; k <= n; ++k) {
    qpow *= q;  // q^k
    poly.coeffs.push_back(poly.coeffs.back() / (BigRational(1) - qpow));
  }
  return poly;
}

BigRational eval_exact(const QPolynomial& poly, const BigRational& x) {
  BigRational acc(0);
  for (auto it = poly.coeffs.rbegin(); it != poly.coeffs.rend(); ++it) {
    acc = acc * x + *it;
  }
  return acc;
}

Ball tail_series(const BigRational& q, int n, const Ball& x, mpfr_prec_t prec) {
  const mpfr_prec_t out = resolve(prec);
  const mpfr_prec_t work = out + 32;
  if (q <= 1) throw domain_error("tail_series: requires q > 1");
  if (n < 0) throw domain_error("tail_series: requires n >= 0");
  if (x.is_exact() && x.contains_zero()) return Ball(out);  // exact zero

  const Ball xw = x.rounded(work);
  const BigRational X = std::max(rat_abs(x.lower_rational()), rat_abs(x.upper_rational()));

  // First tail term x^{n+1}/(q; q)_{n+1}; subsequent terms follow the exact
  // ratio t_{k+1} = t_k * x / (1 - q^{k+1}).
  Ball term = xw.pow(static_cast<unsigned long>(n) + 1) *
              (BigRational(1) / q_pochhammer(q, q, n + 1));
  Ball sum = term;
  const BigRational scale = term.abs().upper_rational();
  const BigRational threshold = scale * pow2_neg(static_cast<unsigned long>(work + 8));

  BigRational qpow = rat_pow(q, n + 1);
  long k = n + 1;
  while (true) {
    if (k - n > kMaxSeriesTerms) {
      throw precision_error("tail_series: series truncation bound not reached");
    }
    // Remainder after the term for exponent k is geometrically dominated with
    // ratio rho = X / (q^{k+1} - 1) once rho < 1.
    const BigRational rho = X / (qpow * q - 1);
    if (rho < 1) {
      const BigRational bound = term.abs().upper_rational() * rho / (BigRational(1) - rho);
      if (bound <= threshold) {
        return sum.padded(bound).rounded(out);
      }
    }
    ++k;
    qpow *= q;
    term = term * xw * (BigRational(1) / (BigRational(1) - qpow));
    sum = sum + term;
  }
}

Ball f_q_product(const BigRational& q, const Ball& x, mpfr_prec_t prec) {
  const mpfr_prec_t out = resolve(prec);
  const mpfr_prec_t work = out + 32;
  if (q <= 1) throw domain_error("f_q_product: requires q > 1");

  const BigRational X = std::max(rat_abs(x.lower_rational()), rat_abs(x.upper_rational()));
  if (X == 0) return Ball::exact(1L, out);

  const BigRational threshold = pow2_neg(static_cast<unsigned long>(work + 8));
  BigRational S = X / (q - 1);
  long J = 1;
  S /= q;
  while (S > threshold) {
    S /= q;
    if (++J > kMaxSeriesTerms) {
      throw precision_error("f_q_product: tail does not shrink fast enough");
    }
  }

  Ball product = Ball::exact(1L, work);
  const Ball xw = x.rounded(work);
  BigRational qpow(1);
  for (long j = 1; j <= J; ++j) {
    qpow *= q;
    product = product * (BigRational(1) - xw * (BigRational(1) / qpow));
  }
  const Ball tail =
      Ball::from_endpoints(BigRational(1) - S, BigRational(1) / (BigRational(1) - S), work);
  return (product * tail).rounded(out);
}

Ball g_inf(const BigRational& q, const Ball& t, mpfr_prec_t prec) {
  const mpfr_prec_t out = resolve(prec);
  const mpfr_prec_t work = out + 32;
  if (q <= 1) throw domain_error("g_inf: requires q > 1");
  if (!t.is_positive() || !t.strictly_less(BigRational(1))) {
    throw domain_error("g_inf: requires an enclosure inside 0 < t < 1");
  }

  const Ball constant = q_pochhammer_inf(BigRational(1), q, work);
  const Ball tw = t.rounded(work);

  // Terms (-t)^l q^{-l(l-1)/2} alternate and shrink strictly (ratio modulus
  // t q^{-(l-1)} < 1), so the true sum lies within one omitted term of any
  // partial sum.
  const BigRational threshold = pow2_neg(static_cast<unsigned long>(work + 8));
  Ball term = Ball::exact(1L, work);
  Ball sum = term;
  BigRational qpow(1);  // q^{l-1}
  for (long l = 1;; ++l) {
    if (l > kMaxSeriesTerms) {
      throw precision_error("g_inf: series truncation bound not reached");
    }
    term = -(term * tw * (BigRational(1) / qpow));
    const BigRational mag = term.abs().upper_rational();
    if (mag <= threshold) {
      return (constant * sum.padded(mag)).rounded(out);
    }
    sum = sum + term;
    qpow *= q;
  }
}

QPolynomial poly_via_recurrence(const BigRational& q, int n) {
  if (q <= 1) throw domain_error("poly_via_recurrence: requires q > 1");
  if (n < 0) throw domain_error("poly_via_recurrence: requires n >= 0");
  QPolynomial poly;
  poly.q = q;
  poly.coeffs = {BigRational(1)};
  BigRational poch(1);   // (q; q)_m
  BigRational qpow_m(1);  // q^m
  for (int m = 1; m <= n; ++m) {
    qpow_m *= q;
    poch *= BigRational(1) - qpow_m;
    std::vector<BigRational> next(static_cast<size_t>(m) + 1);
    BigRational qpow_i(1);  // q^i
    for (int i = 0; i < m; ++i) {
      BigRational v = poly.coeffs[static_cast<size_t>(i)];
      if (i > 0) v -= poly.coeffs[static_cast<size_t>(i) - 1];
      next[static_cast<size_t>(i)] = v / qpow_i;
      qpow_i *= q;
    }
    next[static_cast<size_t>(m)] =
        (BigRational(1) / poch - poly.coeffs[static_cast<size_t>(m) - 1]) / qpow_i;
    poly.coeffs = std::move(next);
  }
  return poly;
}

}  // namespace qmoments
