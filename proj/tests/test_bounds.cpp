#include <doctest.h>

#include <utility>
#include <vector>

#include "qmoments/bounds.hpp"
#include "qmoments/qseries.hpp"

using qmoments::Ball;
using qmoments::BigRational;
using qmoments::rat_abs;
using qmoments::rat_pow;

TEST_CASE("bracketing constants take their closed-form values") {
  const BigRational four(4);
  CHECK(qmoments::c_k(four, 1) == BigRational(1, 2));
  CHECK(qmoments::c_k(four, 2) == BigRational(17, 16));
  CHECK(qmoments::c_k(four, 3) == BigRational(1023, 1024));
  CHECK(qmoments::c_k(BigRational(9), 1) == BigRational(7, 9));
  CHECK(qmoments::c_k(BigRational(9), 2) == BigRational(1) + 4 * rat_pow(BigRational(9), -3));
  CHECK_THROWS_AS((void)qmoments::c_k(BigRational(3), 1), qmoments::domain_error);
  CHECK_THROWS_AS((void)qmoments::c_k(four, 0), qmoments::domain_error);
}

TEST_CASE("scaled roots stay inside their brackets with reference ratios") {
  const auto report = qmoments::root_bound_check(2, 3, 192);
  REQUIRE(report.root_rows.size() == 3);
  const std::vector<BigRational> ratio_targets = {
      BigRational(99949, 100000), BigRational(105029, 100000), BigRational(65933, 100000)};
  for (size_t idx = 0; idx < 3; ++idx) {
    const auto& row = report.root_rows[idx];
    CHECK(row.j == static_cast<int>(idx) + 1);
    CHECK(row.k == 3 - static_cast<int>(idx));
    CHECK(row.pass);
    CHECK(row.near_one_pass);
    CHECK(rat_abs(row.ratio.midpoint_rational() - ratio_targets[idx]) < BigRational(1, 100000));
  }
  CHECK(report.root_rows[0].ck == BigRational(1023, 1024));
  CHECK(report.root_rows[1].ck == BigRational(17, 16));
  CHECK(report.root_rows[2].ck == BigRational(1, 2));
  CHECK(report.all_pass());
}

TEST_CASE("root brackets hold across bases and degrees") {
  for (const long p : {3L, 4L}) {
    for (int n = 1; n <= 6; ++n) {
      CHECK(qmoments::root_bound_check(p, n, 192).all_pass());
    }
  }
}

TEST_CASE("coefficient deviations obey the per-term and summary inequalities") {
  const auto cs = qmoments::coefficients(2, 3, 192);
  const auto report = qmoments::theorem_inequality_check(cs);
  REQUIRE(report.term_rows.size() == 3);
  for (const auto& row : report.term_rows) CHECK(row.pass);
  CHECK(report.sum_pass);
  CHECK(report.sum_bound == BigRational(1, 8));
  CHECK(rat_abs(report.sum.midpoint_rational() - BigRational(35129, 1000000)) <
        BigRational(1, 100000));
  CHECK(report.all_pass());

  CHECK_THROWS_AS(
      (void)qmoments::theorem_inequality_check(
          qmoments::mixed_base_solve(qmoments::BaseSpec(std::vector<long>{2, 3}), 192)),
      qmoments::domain_error);
}

TEST_CASE("closed-form lower quantity at the first base point") {
  CHECK(qmoments::h_hat(BigRational(4), 1) == BigRational(40, 27));
  // polynomial closed form vs. the factored product form, k = 1
  for (const BigRational& q : {BigRational(4), BigRational(9), BigRational(7, 2)}) {
    const BigRational c = BigRational(1) - 2 / q;
    const BigRational product = 2 * rat_pow(c, -2) * (1 - c / (q - 1)) *
                                (1 - rat_pow(c, -1) / (q - 1)) * (1 - 1 / (q - 1));
    CHECK(qmoments::h_hat(q, 1) == product);
  }
  // k = 2 factored form with c_2 = 1 + 4 q^{-3}
  for (const BigRational& q : {BigRational(4), BigRational(9)}) {
    const BigRational c = BigRational(1) + 4 * rat_pow(q, -3);
    const BigRational product = 4 * rat_pow(c, -3) * (1 - c / (q - 1)) *
                                (1 - rat_pow(c, -1) / (q - 1)) * (1 - 1 / q) *
                                (1 - 1 / (q * (q - 1)));
    CHECK(qmoments::h_hat(q, 2) == product);
  }
  CHECK_THROWS_AS((void)qmoments::h_hat(BigRational(2), 1), qmoments::domain_error);
  CHECK_THROWS_AS((void)qmoments::h_hat(BigRational(3), 5), qmoments::domain_error);
}

TEST_CASE("both root-existence quantities exceed one on the verified grid") {
  for (const long qv : {4L, 9L, 16L, 25L}) {
    const BigRational q(qv);
    for (int k = 1; k <= 8; ++k) {
      CHECK(qmoments::h_hat(q, k) > 1);
      const Ball h = qmoments::h_qk(q, k, 192);
      CHECK(h.strictly_greater(BigRational(1)));
    }
  }
}

TEST_CASE("certified value matches a primitive-built reconstruction") {
  const BigRational q(4);
  const int k = 1;
  const BigRational c = qmoments::c_k(q, k);
  const Ball denom = qmoments::q_pochhammer_inf(rat_pow(c, -1), q, 256) *
                     qmoments::q_pochhammer_inf(c, q, 256) *
                     qmoments::g_inf(q, Ball::exact(c * rat_pow(q, -(k + 1)), 256), 256);
  const BigRational numer = (1 - c) * rat_pow(q, 1) * rat_pow(c, -2);
  const Ball h = qmoments::h_qk(q, k, 192);
  CHECK((h * denom - numer).contains_zero());
  CHECK(h.strictly_greater(BigRational(19, 10)));
  CHECK(h.strictly_less(BigRational(21, 10)));
}

TEST_CASE("unit crossings are bracketed to three decimals") {
  const auto [lo1, hi1] = qmoments::h_hat_unit_crossing(1, BigRational(37, 10),
                                                        qmoments::rat_frac(38, 10), BigRational(1, 1000));
  CHECK(hi1 - lo1 <= BigRational(1, 1000));
  CHECK(lo1 >= qmoments::rat_frac(3716, 1000));
  CHECK(hi1 <= BigRational(3719, 1000));
  CHECK(qmoments::h_hat(lo1, 1) < 1);
  CHECK(qmoments::h_hat(hi1, 1) > 1);

  const auto [lo2, hi2] = qmoments::h_hat_unit_crossing(2, BigRational(39, 10), BigRational(4),
                                                        BigRational(1, 1000));
  CHECK(hi2 - lo2 <= BigRational(1, 1000));
  CHECK(lo2 >= qmoments::rat_frac(3972, 1000));
  CHECK(hi2 <= qmoments::rat_frac(3975, 1000));
  CHECK(qmoments::h_hat(lo2, 2) < 1);
  CHECK(qmoments::h_hat(hi2, 2) > 1);

  CHECK_THROWS_AS((void)qmoments::h_hat_unit_crossing(1, BigRational(5), BigRational(6),
                                                      BigRational(1, 100)),
                  qmoments::consistency_error);
}

TEST_CASE("refined constants solve the unit equation on the expected side") {
  const BigRational q(4);
  const auto c1 = qmoments::refined_c_k(q, 1, 128);
  REQUIRE(c1.has_value());
  CHECK(c1->strictly_greater(BigRational(1, 2)));
  CHECK(c1->strictly_less(BigRational(1)));
  const auto c2 = qmoments::refined_c_k(q, 2, 128);
  REQUIRE(c2.has_value());
  CHECK(c2->strictly_greater(BigRational(1)));
  CHECK(c2->strictly_less(BigRational(2)));
  // same side of 1 as the bracketing constant c_k
  CHECK((qmoments::c_k(q, 1) < 1) == c1->strictly_less(BigRational(1)));
  CHECK((qmoments::c_k(q, 2) > 1) == c2->strictly_greater(BigRational(1)));
}

TEST_CASE("scaled displacement of the refined constant approaches the cubed product") {
  // (-1)^{k+1} (1 - c*) q^{binom(k+1,2)} tends to (1; q)_{-inf}^3 as k grows:
  // at the crossing the three denominator factors of h each approach the
  // infinite product, and every other factor approaches 1.
  const BigRational q(4);
  const Ball target = qmoments::q_pochhammer_inf(BigRational(1), q, 192).pow(3);
  std::vector<BigRational> gaps;
  for (const int k : {3, 4, 5}) {
    const auto ck = qmoments::refined_c_k(q, k, 160);
    REQUIRE(ck.has_value());
    Ball scaled = (BigRational(1) - *ck) *
                  Ball::exact(rat_pow(q, static_cast<long>(k) * (k + 1) / 2), 192);
    if (k % 2 == 0) scaled = -scaled;
    gaps.push_back(rat_abs(scaled.midpoint_rational() - target.midpoint_rational()));
  }
  CHECK(gaps[1] < gaps[0]);
  CHECK(gaps[2] < gaps[1]);
  CHECK(gaps[2] < BigRational(1, 100));
}

TEST_CASE("scaled top-root sequences are certified monotone") {
  const auto rep21 = qmoments::monotonicity_check(2, 1, 8, 192);
  CHECK(rep21.monotone);
  CHECK(rep21.direction == -1);
  REQUIRE(rep21.values.size() == 8);
  for (const auto& v : rep21.values) {
    CHECK(v.strictly_greater(BigRational(1, 2)));
    CHECK(v.strictly_less(BigRational(1)));
  }
  const auto rep32 = qmoments::monotonicity_check(3, 2, 8, 192);
  CHECK(rep32.monotone);
  const auto single = qmoments::monotonicity_check(2, 4, 4, 192);
  CHECK(single.monotone);
  CHECK(single.direction == 0);
  CHECK_THROWS_AS((void)qmoments::monotonicity_check(2, 5, 4, 192), qmoments::domain_error);
}
