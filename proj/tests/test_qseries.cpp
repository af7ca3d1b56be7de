#include <doctest.h>

#include <vector>

#include "qmoments/qseries.hpp"

using qmoments::Ball;
using qmoments::BigRational;
using qmoments::QPolynomial;
using qmoments::rat_abs;
using qmoments::rat_pow;

namespace {

// Direct-definition oracle: prod_{j=0..k-1} (1 - a q^j), written independently
// of the library implementation.
BigRational poch_oracle(const BigRational& a, const BigRational& q, long k) {
  BigRational acc(1);
  for (long j = 0; j < k; ++j) acc *= BigRational(1) - a * rat_pow(q, j);
  return acc;
}

}  // namespace

TEST_CASE("q-Pochhammer finite products match the direct definition") {
  const BigRational four(4);
  CHECK(qmoments::q_pochhammer(four, four, 0) == 1);
  CHECK(qmoments::q_pochhammer(four, four, 4) == 722925);
  CHECK(qmoments::q_pochhammer(four, four, 5) == -739552275);
  for (const long k : {1L, 2L, 3L, 6L}) {
    for (const BigRational& a : {BigRational(2), BigRational(1, 2), BigRational(-3, 5)}) {
      CHECK(qmoments::q_pochhammer(a, four, k) == poch_oracle(a, four, k));
      CHECK(qmoments::q_pochhammer(a, BigRational(9), k) == poch_oracle(a, BigRational(9), k));
    }
  }
}

TEST_CASE("negative-index values invert a shifted finite product") {
  const BigRational q(4);
  // (a; q)_{-k} = 1 / (a q^{-k}; q)_k
  for (const long k : {1L, 2L, 4L}) {
    for (const BigRational& a : {BigRational(2), BigRational(3, 7)}) {
      const BigRational lhs = qmoments::q_pochhammer(a, q, -k);
      const BigRational rhs = poch_oracle(a * rat_pow(q, -k), q, k);
      CHECK(lhs * rhs == 1);
    }
  }
  CHECK(qmoments::q_pochhammer(BigRational(2), q, -1) == 2);
  // a = q makes the j = 1 factor 1 - q q^{-1} vanish.
  CHECK_THROWS_AS((void)qmoments::q_pochhammer(q, q, -1), qmoments::pole_error);
}

TEST_CASE("splitting identity across positive indices") {
  const BigRational q(9);
  const BigRational a(5, 3);
  for (const long k : {0L, 1L, 3L}) {
    for (const long m : {0L, 2L, 4L}) {
      // (a; q)_{k+m} = (a; q)_k * (a q^k; q)_m
      CHECK(qmoments::q_pochhammer(a, q, k + m) ==
            qmoments::q_pochhammer(a, q, k) *
                qmoments::q_pochhammer(a * rat_pow(q, k), q, m));
    }
  }
}

TEST_CASE("infinite negative-index product against its defining partial products") {
  const BigRational q(4);
  const Ball value = qmoments::q_pochhammer_inf(BigRational(1), q, 192);
  // Partial products prod_{j<=J} 1/(1 - q^{-j}) increase to the limit;
  // multiplying by the certified tail bound must bracket the returned ball.
  BigRational partial(1);
  for (long j = 1; j <= 40; ++j) partial /= BigRational(1) - rat_pow(q, -j);
  CHECK(value.strictly_greater(partial * BigRational(999999, 1000000)));
  CHECK(value.strictly_less(partial * BigRational(1000001, 1000000)));
  CHECK(value.radius_upper_rational() < rat_pow(BigRational(2), -150));
}

TEST_CASE("infinite product times the entire-function value is exactly one") {
  // (a; q)_{-inf} * prod_{j>=1}(1 - a q^{-j}) = 1 by definition, giving a
  // library-independent consistency equation between the two routes.
  for (const BigRational& q : {BigRational(4), BigRational(9)}) {
    for (const BigRational& a : {BigRational(1), BigRational(2), BigRational(-7, 2)}) {
      const Ball inf = qmoments::q_pochhammer_inf(a, q, 192);
      const Ball fin = qmoments::f_q_product(q, Ball::exact(a, 192), 192);
      CHECK((inf * fin - BigRational(1)).contains_zero());
    }
  }
}

TEST_CASE("infinite product rejects a vanishing or sign-breaking factor") {
  CHECK_THROWS_AS((void)qmoments::q_pochhammer_inf(BigRational(4), BigRational(4), 96),
                  qmoments::pole_error);
  CHECK_THROWS_AS((void)qmoments::q_pochhammer_inf(BigRational(5), BigRational(4), 96),
                  qmoments::pole_error);
}

TEST_CASE("truncation coefficients follow the exact ratio recurrence") {
  const QPolynomial poly = qmoments::truncated_q_exponential(BigRational(4), 3);
  REQUIRE(poly.degree() == 3);
  CHECK(poly.coeffs[0] == 1);
  CHECK(poly.coeffs[1] == BigRational(-1, 3));
  CHECK(poly.coeffs[2] == BigRational(1, 45));
  CHECK(poly.coeffs[3] == BigRational(-1, 2835));
  // coefficient k equals 1/(q; q)_k against the oracle
  for (int k = 0; k <= 3; ++k) {
    CHECK(poly.coeffs[static_cast<size_t>(k)] * poch_oracle(BigRational(4), BigRational(4), k) == 1);
  }
  CHECK_THROWS_AS((void)qmoments::truncated_q_exponential(BigRational(1), 3),
                  qmoments::domain_error);
}

TEST_CASE("exact evaluation reproduces the hand-reduced sign table") {
  const QPolynomial poly = qmoments::truncated_q_exponential(BigRational(4), 3);
  CHECK(qmoments::eval_exact(poly, BigRational(2)) == BigRational(1189, 2835));
  CHECK(qmoments::eval_exact(poly, BigRational(8)) == qmoments::rat_frac(-1205, 2835));
  CHECK(qmoments::eval_exact(poly, BigRational(32)) == BigRational(4339, 2835));
  CHECK(qmoments::eval_exact(poly, BigRational(128)) == qmoments::rat_frac(-1183085, 2835));
}

TEST_CASE("series tail matches a long partial sum with a geometric remainder") {
  const BigRational q(4);
  const Ball tail = qmoments::tail_series(q, 3, Ball::exact(1L, 192), 192);
  // Oracle: sum_{k=4..12} 1/(q;q)_k exactly, remainder below twice the next
  // term's magnitude (the term ratio is below 1/(q^13 - 1)).
  BigRational partial(0);
  for (long k = 4; k <= 12; ++k) partial += BigRational(1) / poch_oracle(q, q, k);
  const BigRational next = rat_abs(BigRational(1) / poch_oracle(q, q, 13));
  CHECK(tail.upper_rational() <= partial + 2 * next);
  CHECK(tail.lower_rational() >= partial - 2 * next);
  CHECK(tail.radius_upper_rational() < rat_pow(BigRational(2), -150));
}

TEST_CASE("truncation plus tail equals the entire-function product") {
  // eval(F_{q,<=N}, x) + tail(q, N, x) = prod_{j>=1}(1 - x q^{-j}) for every x;
  // checked as a ball identity at N = 20.
  for (const BigRational& q : {BigRational(4), BigRational(9)}) {
    const QPolynomial trunc = qmoments::truncated_q_exponential(q, 20);
    for (const BigRational& x : {BigRational(1, 2), BigRational(2), BigRational(7)}) {
      const Ball lhs = Ball::exact(qmoments::eval_exact(trunc, x), 192) +
                       qmoments::tail_series(q, 20, Ball::exact(x, 192), 192);
      const Ball rhs = qmoments::f_q_product(q, Ball::exact(x, 192), 192);
      CHECK((lhs - rhs).contains_zero());
      CHECK(lhs.radius_upper_rational() < rat_pow(BigRational(2), -120));
    }
  }
}

TEST_CASE("alternating series value for the scaled limit function") {
  const BigRational q(4);
  const Ball g = qmoments::g_inf(q, Ball::exact(BigRational(1, 32), 192), 192);
  // Oracle: (1; q)_{-inf} * partial alternating sum, remainder bounded by the
  // first omitted term.
  BigRational sum(0);
  BigRational term(1);
  for (long l = 0; l <= 8; ++l) {
    sum += term;
    term = -term * BigRational(1, 32) * rat_pow(q, -l);
  }
  const Ball constant = qmoments::q_pochhammer_inf(BigRational(1), q, 192);
  const Ball oracle = constant * Ball::from_endpoints(sum - rat_abs(term), sum + rat_abs(term), 192);
  CHECK(g.overlaps(oracle));
  CHECK(g.is_positive());
  CHECK(g.radius_upper_rational() < rat_pow(BigRational(2), -150));

  CHECK_THROWS_AS((void)qmoments::g_inf(q, Ball::exact(2L, 96), 96), qmoments::domain_error);
  CHECK_THROWS_AS((void)qmoments::g_inf(q, Ball::exact(0L, 96), 96), qmoments::domain_error);
}

TEST_CASE("backwards recurrence rebuilds the truncation exactly") {
  for (const long qv : {4L, 9L, 16L}) {
    const BigRational q(qv);
    for (int n = 0; n <= 15; ++n) {
      CHECK(qmoments::poly_via_recurrence(q, n).coeffs ==
            qmoments::truncated_q_exponential(q, n).coeffs);
    }
  }
}
