#include "qmoments/bounds.hpp"

#include <algorithm>

#include "qmoments/qseries.hpp"
#include "qmoments/rootfind.hpp"

namespace qmoments {

namespace {

mpfr_prec_t resolve(mpfr_prec_t prec) { return prec > 0 ? prec : default_precision(); }

unsigned long binom2(int k) {  // binom(k+1, 2)
  return static_cast<unsigned long>(k) * (static_cast<unsigned long>(k) + 1) / 2;
}

// c_k without the q >= 4 gate (threshold scans evaluate slightly below 4).
BigRational c_value(const BigRational& q, int k) {
  if (k == 1) return BigRational(1) - BigRational(2) / q;
  const BigRational shift = BigRational(4) * rat_pow(q, -static_cast<long>(binom2(k)));
  return (k % 2 == 0) ? BigRational(BigRational(1) + shift) : BigRational(BigRational(1) - shift);
}

// h with a free bracketing constant c in place of c_k:
//   (-1)^{k+1} (1-c) q^{binom(k+1,2)} c^{-1-k}
//   / ((c^{-1}; q)_{-inf} (c; q)_{-inf} G_{q,inf}(c q^{-k-1})).
// The numerator is exact rational; the denominator is certified balls.
Ball h_of_c(const BigRational& q, int k, const BigRational& c, mpfr_prec_t work) {
  BigRational s = (BigRational(1) - c) * rat_pow(q, static_cast<long>(binom2(k))) *
                  rat_pow(c, -(static_cast<long>(k) + 1));
  if (k % 2 == 0) s = -s;  // (-1)^{k+1}
  const Ball p_inv = q_pochhammer_inf(BigRational(1) / c, q, work);
  const Ball p_dir = q_pochhammer_inf(c, q, work);
  const Ball g = g_inf(q, Ball::exact(c * rat_pow(q, -(static_cast<long>(k) + 1)), work), work);
  return Ball::exact(s, work) / (p_inv * p_dir * g);
}

// Rational lower/upper bounds for sqrt(q), used to stay strictly inside the
// open range (q^{-1/2}, q^{1/2}).
std::pair<BigRational, BigRational> sqrt_bounds(const BigRational& q) {
  mpfr_t t;
  mpfr_init2(t, 96);
  mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(t, t, MPFR_RNDD);
  BigRational lo;
  mpfr_get_q(lo.get_mpq_t(), t);
  mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(t, t, MPFR_RNDU);
  BigRational hi;
  mpfr_get_q(hi.get_mpq_t(), t);
  mpfr_clear(t);
  return {lo, hi};
}

}  // namespace

bool BoundReport::all_pass() const {
  for (const auto& row : root_rows) {
    if (!row.pass || !row.near_one_pass) return false;
  }
  for (const auto& row : term_rows) {
    if (!row.pass) return false;
  }
  if (!term_rows.empty() && !sum_pass) return false;
  return true;
}

BigRational c_k(const BigRational& q, int k) {
  if (q < 4) throw domain_error("c_k: requires q >= 4");
  if (k < 1) throw domain_error("c_k: requires k >= 1");
  return c_value(q, k);
}

BoundReport root_bound_check(long p, int n, mpfr_prec_t precision) {
  const mpfr_prec_t out = resolve(precision);
  const BigRational q = BigRational(p) * p;
  // The tightest brackets pin the ratio within 4 q^{-binom(k+1,2)} of 1, so
  // the enclosures must be computed well below that width to certify
  // membership; keep the ratio at working precision instead of rounding.
  const mpfr_prec_t work =
      out +
      static_cast<mpfr_prec_t>(binom2(n)) *
          static_cast<mpfr_prec_t>(mpz_sizeinbase(BigInt(q.get_num()).get_mpz_t(), 2)) +
      64;
  const auto roots = roots_all(p, n, work);

  BoundReport report;
  report.p = p;
  report.n = n;
  report.root_rows.reserve(roots.size());
  for (const auto& root : roots) {
    BoundReport::RootRow row;
    row.j = root.index;
    row.k = n + 1 - root.index;
    row.ratio = root.value * rat_pow(q, -root.index);
    row.ck = c_k(q, row.k);
    const BigRational lo = std::min(BigRational(1), row.ck);
    const BigRational hi = std::max(BigRational(1), row.ck);
    row.pass = row.ratio.lower_rational() >= lo && row.ratio.upper_rational() <= hi;
    if (row.k >= 2) {
      const BigRational near_bound =
          BigRational(5) * rat_pow(q, -static_cast<long>(binom2(row.k)));
      row.near_one_pass =
          (row.ratio - BigRational(1)).abs().upper_rational() <= near_bound;
    }
    report.root_rows.push_back(std::move(row));
  }
  return report;
}

BoundReport theorem_inequality_check(const CoefficientSet& cs) {
  if (!cs.spec.uniform()) {
    throw domain_error("theorem_inequality_check: requires a uniform-base CoefficientSet");
  }
  const long p = cs.spec.bases.front();
  const int n = cs.spec.n();
  const mpfr_prec_t prec = cs.a.front().precision();

  BoundReport report;
  report.p = p;
  report.n = n;
  Ball sum(prec);
  for (int j = 1; j <= n; ++j) {
    BoundReport::TermRow row;
    row.j = j;
    row.k = n + 1 - j;
    row.deviation = (cs.a[static_cast<size_t>(j) - 1] - rat_pow(BigRational(p), -j)).abs();
    row.bound = BigRational(2) * rat_pow(BigRational(p), -(j + 4 * row.k - 2));
    row.pass = row.deviation.strictly_less(row.bound);
    sum = sum + row.deviation;
    report.term_rows.push_back(std::move(row));
  }
  report.sum = sum;
  report.sum_bound =
      BigRational(1) / (rat_pow(BigRational(p), n) * (BigRational(p) - 1));
  report.sum_pass = sum.strictly_less(report.sum_bound);
  return report;
}

Ball h_qk(const BigRational& q, int k, mpfr_prec_t precision) {
  if (q < 4) throw domain_error("h_qk: requires q >= 4");
  if (k < 1) throw domain_error("h_qk: requires k >= 1");
  const mpfr_prec_t out = resolve(precision);
  return h_of_c(q, k, c_value(q, k), out + 32).rounded(out);
}

BigRational h_hat(const BigRational& q, int k) {
  if (k < 1) throw domain_error("h_hat: requires k >= 1");
  if (k <= 2) {
    if (q <= 2) throw domain_error("h_hat: closed forms require q > 2");
    if (k == 1) {
      // 2q(q^2-4q+2)(q^2-2q+2) / ((q-1)^3 (q-2)^2)
      return BigRational(2) * q * (q * q - 4 * q + 2) * (q * q - 2 * q + 2) /
             (rat_pow(q - 1, 3) * rat_pow(q - 2, 2));
    }
    // 4q^4 (q^2-q-1)(q^2-2q+2)(q^2-2)(q^4-2q^3-4) / ((q-1)^2 (q^3+4)^4)
    const BigRational q2 = q * q;
    const BigRational q3 = q2 * q;
    const BigRational q4 = q3 * q;
    return BigRational(4) * q4 * (q2 - q - 1) * (q2 - 2 * q + 2) * (q2 - 2) *
           (q4 - 2 * q3 - 4) / (rat_pow(q - 1, 2) * rat_pow(q3 + 4, 4));
  }
  if (q < 4) throw domain_error("h_hat: k > 2 form requires q >= 4");
  // 4 c_k^{-1-k} (1 - c_k/(q-1)) (1 - c_k^{-1}/(q-1)) (1 - 1/(q-1))
  const BigRational c = c_value(q, k);
  return BigRational(4) * rat_pow(c, -(static_cast<long>(k) + 1)) *
         (BigRational(1) - c / (q - 1)) * (BigRational(1) - rat_pow(c, -1) / (q - 1)) *
         (BigRational(1) - BigRational(1) / (q - 1));
}

std::pair<BigRational, BigRational> h_hat_unit_crossing(int k, const BigRational& lo,
                                                        const BigRational& hi,
                                                        const BigRational& width) {
  if (!(lo < hi) || !(width > 0)) {
    throw domain_error("h_hat_unit_crossing: need lo < hi and width > 0");
  }
  auto side = [k](const BigRational& q) { return h_hat(q, k) > 1 ? 1 : -1; };
  BigRational a = lo;
  BigRational b = hi;
  int sa = side(a);
  if (sa == side(b)) {
    throw consistency_error("h_hat_unit_crossing: no sign change across the bracket");
  }
  while (b - a > width) {
    const BigRational mid = (a + b) / 2;
    if (side(mid) == sa) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return {a, b};
}

std::optional<Ball> refined_c_k(const BigRational& q, int k, mpfr_prec_t precision) {
  if (q < 4) throw domain_error("refined_c_k: requires q >= 4");
  if (k < 1) throw domain_error("refined_c_k: requires k >= 1");
  const mpfr_prec_t out = resolve(precision);
  const mpfr_prec_t work = out + 64;
  const auto [sqrt_lo, sqrt_hi] = sqrt_bounds(q);

  // The crossing sits between 1 (where h -> 0) and the far end of the range:
  // below 1 for odd k, above 1 for even k.  Find certified endpoint signs.
  const BigRational far_limit = (k % 2 == 1) ? BigRational(1) / sqrt_lo : sqrt_lo;
  auto toward_one = [&](const BigRational& frac) -> BigRational {
    // point at fractional distance `frac` from far_limit toward 1
    return far_limit + (BigRational(1) - far_limit) * frac;
  };

  // certified sign of h(c) - 1: +1 / -1 / 0 (undecided)
  auto sign_at = [&](const BigRational& c) {
    const Ball h = h_of_c(q, k, c, work);
    if (h.strictly_greater(BigRational(1))) return 1;
    if (h.strictly_less(BigRational(1))) return -1;
    return 0;
  };

  BigRational far(0), near(0);
  int far_sign = 0;
  for (const auto& frac : {BigRational(1, 64), BigRational(1, 16), BigRational(1, 8),
                           BigRational(1, 4)}) {
    const BigRational c = toward_one(frac);
    if (sign_at(c) == 1) {
      far = c;
      far_sign = 1;
      break;
    }
  }
  if (far_sign == 0) return std::nullopt;
  // The near endpoint must land between 1 and the crossing, whose distance
  // from 1 shrinks like q^{-binom(k+1,2)}: halve toward 1 until the sign of
  // h - 1 flips, with a cap scaled to that displacement.
  BigInt q_ceil;
  mpz_cdiv_q(q_ceil.get_mpz_t(), mpq_numref(q.get_mpq_t()), mpq_denref(q.get_mpq_t()));
  const long near_cap =
      static_cast<long>(binom2(k)) *
          static_cast<long>(mpz_sizeinbase(q_ceil.get_mpz_t(), 2)) +
      80;
  bool have_near = false;
  BigRational half(1, 2);
  for (long m = 1; m <= near_cap; ++m) {
    const BigRational c = toward_one(BigRational(1) - half);
    if (sign_at(c) == -1) {
      near = c;
      have_near = true;
      break;
    }
    half = half / 2;
  }
  if (!have_near) return std::nullopt;

  BigRational lo = std::min(far, near);
  BigRational hi = std::max(far, near);
  int sign_lo = (lo == far) ? 1 : -1;
  const BigRational target = [&] {
    BigRational t(1);
    mpz_mul_2exp(mpq_denref(t.get_mpq_t()), mpq_denref(t.get_mpq_t()),
                 static_cast<unsigned long>(out));
    mpq_canonicalize(t.get_mpq_t());
    return t;
  }();
  for (int iter = 0; iter < 200 && hi - lo > target; ++iter) {
    const BigRational mid = (lo + hi) / 2;
    const int s = sign_at(mid);
    if (s == 0) break;  // sign no longer certifiable at this precision
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  Ball result = Ball::from_endpoints(lo, hi, out);
  // 1/sqrt_lo >= q^{-1/2} and sqrt_lo <= q^{1/2}, so these comparisons prove
  // membership in the open range (q^{-1/2}, q^{1/2}).
  if (!result.strictly_greater(BigRational(1) / sqrt_lo) || !result.strictly_less(sqrt_lo)) {
    return std::nullopt;  // could not certify membership in the stated open range
  }
  return result;
}

MonotonicityReport monotonicity_check(long p, int k, int n_max, mpfr_prec_t precision) {
  if (p < 2) throw domain_error("monotonicity_check: requires p >= 2");
  if (k < 1 || k > n_max) throw domain_error("monotonicity_check: requires 1 <= k <= n_max");
  const mpfr_prec_t out = resolve(precision);
  const BigRational q = BigRational(p) * p;

  MonotonicityReport report;
  report.p = p;
  report.k = k;
  report.values.reserve(static_cast<size_t>(n_max - k) + 1);
  for (int n = k; n <= n_max; ++n) {
    const int j = n + 1 - k;
    const auto roots = roots_all(p, n, out + 32);
    report.values.push_back(
        (roots[static_cast<size_t>(j) - 1].value * rat_pow(q, -j)).rounded(out));
  }
  report.monotone = true;
  if (report.values.size() < 2) {
    report.direction = 0;
    return report;
  }
  for (size_t i = 0; i + 1 < report.values.size(); ++i) {
    int dir;
    if (report.values[i].strictly_less(report.values[i + 1])) {
      dir = 1;
    } else if (report.values[i + 1].strictly_less(report.values[i])) {
      dir = -1;
    } else {
      throw precision_error("monotonicity_check: consecutive enclosures overlap");
    }
    if (i == 0) {
      report.direction = dir;
    } else if (dir != report.direction) {
      report.monotone = false;
    }
  }
  return report;
}

}  // namespace qmoments
