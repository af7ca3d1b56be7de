// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Tolerances are pinned in the code next to each check.
#include <cstdio>
#include <exception>
#include <sstream>
#include <string>
#include <vector>

#include "qmoments/bounds.hpp"
#include "qmoments/momentmatch.hpp"
#include "qmoments/qseries.hpp"
#include "qmoments/quadrature.hpp"
#include "qmoments/rational.hpp"
#include "qmoments/rootfind.hpp"

using qmoments::Ball;
using qmoments::BaseSpec;
using qmoments::BigInt;
using qmoments::BigRational;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& note = "") {
  std::printf("%s %s%s%s\n", ok ? "PASS" : "FAIL", name.c_str(), note.empty() ? "" : " -- ",
              note.c_str());
  if (!ok) ++failures;
}

template <typename Fn>
void criterion(const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(name, false, std::string("exception: ") + e.what());
  }
}

// |ball - printed reference| < tol, certified by the enclosure upper bound.
bool agrees(const Ball& x, const BigRational& ref, const BigRational& tol) {
  return (x - ref).abs().upper_rational() < tol;
}

BigRational dec(long digits, long scale) { return qmoments::rat_frac(digits, scale); }

}  // namespace

int main() {
  const mpfr_prec_t prec = 192;
  const BigRational tol6 = dec(1, 1000000);   // agreement with 6 printed decimals
  const BigRational tol5 = dec(1, 100000);    // agreement with 5 printed decimals

  criterion("reference_roots_base2_n3", [&] {
    const auto roots = qmoments::roots_all(2, 3, prec);
    const BigRational refs[] = {dec(3997956, 1000000), dec(1680465, 100000),
                                dec(4219739, 100000)};
    bool ok = roots.size() == 3;
    for (size_t i = 0; ok && i < 3; ++i) {
      const Ball rel = (roots[i].value - refs[i]) / Ball::exact(refs[i], prec);
      ok = rel.abs().upper_rational() < dec(5, 1000000);
    }
    report("reference_roots_base2_n3", ok);
  });

  criterion("reference_coefficients_base2_n3", [&] {
    const auto cs = qmoments::coefficients(2, 3, prec);
    const BigRational refs[] = {dec(500128, 1000000), dec(243941, 1000000),
                                dec(153942, 1000000)};
    bool ok = cs.converged && cs.a.size() == 3;
    for (size_t i = 0; ok && i < 3; ++i) ok = agrees(cs.a[i], refs[i], tol6);
    report("reference_coefficients_base2_n3", ok);
  });

  criterion("exact_polynomial_sign_table", [&] {
    const auto poly = qmoments::truncated_q_exponential(BigRational(4), 3);
    const long xs[] = {2, 8, 32, 128};
    const BigRational vals[] = {BigRational(1189, 2835), qmoments::rat_frac(-1205, 2835),
                                BigRational(4339, 2835), qmoments::rat_frac(-1183085, 2835)};
    bool ok = true;
    for (int i = 0; i < 4; ++i)
      ok = ok && qmoments::eval_exact(poly, BigRational(xs[i])) == vals[i];
    report("exact_polynomial_sign_table", ok);
  });

  criterion("power_sum_residuals", [&] {
    const BigRational tol(BigInt(1), qmoments::rat_pow(BigRational(10), 30).get_num());
    bool ok = true;
    for (long p = 2; p <= 5 && ok; ++p) {
      for (int n = 1; n <= 12 && ok; ++n) {
        const auto cs = qmoments::coefficients(p, n, prec);
        ok = cs.converged;
        for (const Ball& res : qmoments::power_sum_residuals(cs)) {
          ok = ok && res.contains_zero() && res.radius_upper_rational() < tol;
        }
      }
    }
    report("power_sum_residuals", ok);
  });

  criterion("quadrature_exactness_and_sharpness", [&] {
    bool ok = true;
    for (long p = 2; p <= 4 && ok; ++p) {
      for (int n = 1; n <= 6 && ok; ++n) {
        const auto qf = qmoments::enumerate_nodes(qmoments::coefficients(p, n, prec));
        const auto res = qmoments::exactness_residuals(qf, 2 * n + 2);
        ok = res.size() == static_cast<size_t>(2 * n + 3);
        for (int k = 0; ok && k <= 2 * n + 1; ++k)
          ok = res[static_cast<size_t>(k)].contains_zero();
        ok = ok && !res.back().contains_zero();
      }
    }
    report("quadrature_exactness_and_sharpness", ok);
  });

  criterion("four_point_chebyshev_nodes", [&] {
    const auto qf = qmoments::enumerate_nodes(qmoments::coefficients(2, 2, prec));
    const BigRational outer = dec(794654, 1000000), inner = dec(187592, 1000000);
    bool ok = qf.count() == 4 && qf.weight == BigRational(1, 4);
    ok = ok && agrees(qf.nodes[0], -outer, tol6) && agrees(qf.nodes[1], -inner, tol6) &&
         agrees(qf.nodes[2], inner, tol6) && agrees(qf.nodes[3], outer, tol6);
    report("four_point_chebyshev_nodes", ok);
  });

  criterion("ruler_property", [&] {
    bool ok = true;
    for (long p = 2; p <= 5 && ok; ++p) {
      for (int n = 1; n <= 8 && ok; ++n) {
        const auto qf = qmoments::enumerate_nodes(qmoments::coefficients(p, n, prec));
        ok = qmoments::ruler_check(qf).pass();
      }
    }
    report("ruler_property", ok);
  });

  criterion("coefficient_deviation_inequality", [&] {
    bool ok = true;
    for (long p = 2; p <= 5 && ok; ++p) {
      for (int n = 1; n <= 10 && ok; ++n) {
        const auto rep =
            qmoments::theorem_inequality_check(qmoments::coefficients(p, n, prec));
        ok = rep.sum_pass;
        for (const auto& row : rep.term_rows) ok = ok && row.pass;
      }
    }
    if (ok) {
      const auto rep = qmoments::theorem_inequality_check(qmoments::coefficients(2, 3, prec));
      ok = rep.sum_bound == BigRational(1, 8) && agrees(rep.sum, dec(35129, 1000000), tol5);
    }
    report("coefficient_deviation_inequality", ok);
  });

  criterion("scaled_root_brackets", [&] {
    bool ok = true;
    for (long p = 2; p <= 5 && ok; ++p) {
      for (int n = 1; n <= 10 && ok; ++n) {
        const auto rep = qmoments::root_bound_check(p, n, prec);
        for (const auto& row : rep.root_rows) ok = ok && row.pass;
      }
    }
    if (ok) {
      // q = 4, n = 3: rows run j = 1..3 (k = 3, 2, 1).
      const auto rep = qmoments::root_bound_check(2, 3, prec);
      ok = rep.root_rows.size() == 3 &&
           rep.root_rows[0].ck == BigRational(1023, 1024) &&
           rep.root_rows[1].ck == BigRational(17, 16) &&
           rep.root_rows[2].ck == BigRational(1, 2) &&
           agrees(rep.root_rows[0].ratio, dec(99949, 100000), tol5) &&
           agrees(rep.root_rows[1].ratio, dec(105029, 100000), tol5) &&
           agrees(rep.root_rows[2].ratio, dec(65933, 100000), tol5);
    }
    report("scaled_root_brackets", ok);
  });

  criterion("mixed_base_closed_forms", [&] {
    const Ball sqrt30 = Ball::exact(BigRational(30), prec).sqrt();
    const BigRational tol10(BigInt(1), qmoments::rat_pow(BigRational(10), 10).get_num());
    bool ok = true;

    const auto c23 = qmoments::mixed_base_solve(BaseSpec(std::vector<long>{2, 3}), prec);
    ok = c23.converged &&
         (c23.r[0] - (Ball::exact(BigRational(15), prec) - sqrt30 * 2L))
                 .abs().upper_rational() < tol10 &&
         (c23.r[1] - (Ball::exact(BigRational(20), prec) + sqrt30 * 2L))
                 .abs().upper_rational() < tol10;

    const auto c32 = qmoments::mixed_base_solve(BaseSpec(std::vector<long>{3, 2}), prec);
    ok = ok && c32.converged &&
         (c32.r[0] - (Ball::exact(BigRational(20), prec) - sqrt30 * 2L))
                 .abs().upper_rational() < tol10 &&
         (c32.r[1] - (Ball::exact(BigRational(15), prec) + sqrt30 * 2L))
                 .abs().upper_rational() < tol10;

    const BigRational nodes23[] = {dec(856652, 1000000), dec(497177, 1000000),
                                   dec(137703, 1000000)};
    const BigRational nodes32[] = {dec(861274, 1000000), dec(468698, 1000000),
                                   dec(196288, 1000000)};
    const auto q23 = qmoments::enumerate_nodes(c23);
    const auto q32 = qmoments::enumerate_nodes(c32);
    ok = ok && q23.count() == 6 && q32.count() == 6;
    for (int i = 0; ok && i < 3; ++i) {
      ok = agrees(q23.nodes[static_cast<size_t>(i)], -nodes23[i], tol6) &&
           agrees(q23.nodes[static_cast<size_t>(5 - i)], nodes23[i], tol6) &&
           agrees(q32.nodes[static_cast<size_t>(i)], -nodes32[i], tol6) &&
           agrees(q32.nodes[static_cast<size_t>(5 - i)], nodes32[i], tol6);
    }
    report("mixed_base_closed_forms", ok);
  });

  criterion("recurrence_matches_truncation", [&] {
    bool ok = true;
    for (long q : {4L, 9L, 16L}) {
      for (int n = 0; n <= 15 && ok; ++n) {
        const auto direct = qmoments::truncated_q_exponential(BigRational(q), n);
        const auto rec = qmoments::poly_via_recurrence(BigRational(q), n);
        ok = direct.coeffs == rec.coeffs;
      }
    }
    report("recurrence_matches_truncation", ok);
  });

  criterion("bound_quantities_exceed_one", [&] {
    bool ok = true;
    for (long q : {4L, 9L, 16L, 25L}) {
      for (int k = 1; k <= 8 && ok; ++k) {
        ok = qmoments::h_qk(BigRational(q), k, prec).strictly_greater(BigRational(1)) &&
             qmoments::h_hat(BigRational(q), k) > 1;
      }
    }
    ok = ok && qmoments::h_hat(BigRational(4), 1) == BigRational(40, 27);
    if (ok) {
      const auto [lo1, hi1] = qmoments::h_hat_unit_crossing(1, BigRational(3), BigRational(4),
                                                            BigRational(1, 1000));
      const auto [lo2, hi2] = qmoments::h_hat_unit_crossing(2, BigRational(3), BigRational(4),
                                                            BigRational(1, 1000));
      ok = lo1 > dec(37, 10) && hi1 < dec(38, 10) && lo2 > dec(39, 10) && hi2 < dec(40, 10);
    }
    report("bound_quantities_exceed_one", ok);
  });

  criterion("scaled_root_monotonicity", [&] {
    bool ok = true;
    for (long p : {2L, 3L}) {
      for (int k = 1; k <= 4 && ok; ++k) {
        ok = qmoments::monotonicity_check(p, k, 10, prec).monotone;
      }
    }
    report("scaled_root_monotonicity", ok);
  });

  criterion("cumulant_relation", [&] {
    bool ok = true;
    for (long p = 2; p <= 5 && ok; ++p) {
      for (const Ball& res : qmoments::cumulants_check(p, 8, prec)) {
        ok = ok && res.contains_zero();
      }
    }
    if (ok) {
      std::vector<BigRational> mu(17);
      for (long m = 0; m <= 16; ++m) mu[static_cast<size_t>(m)] =
          qmoments::discrete_uniform_moment(2, m);
      const auto kappa = qmoments::cumulants_from_moments(mu);
      for (int k = 1; k <= 8 && ok; ++k) {
        const BigRational& v = kappa[static_cast<size_t>(2 * k)];
        ok = (k % 2 == 1) ? v > 0 : v < 0;
      }
    }
    report("cumulant_relation", ok);
  });

  criterion("golden_text_figure", [&] {
    const auto qf = qmoments::enumerate_nodes(qmoments::coefficients(2, 3, prec));
    const std::string fig = qmoments::emit_figure(qf, qmoments::FigureFormat::text);
    bool ok = fig == qmoments::emit_figure(qf, qmoments::FigureFormat::text);
    std::vector<std::string> lines;
    std::istringstream in(fig);
    for (std::string line; std::getline(in, line);) lines.push_back(line);
    ok = ok && !lines.empty();
    if (ok) {
      const std::string& dots = lines.back();
      std::vector<int> eighth;
      for (size_t col = 0; col < dots.size(); ++col) {
        if (dots[col] != '*') continue;
        // eighth i covers columns (32 i, 32 (i+1)) strictly, on a 257-wide axis
        ok = ok && col % 32 != 0;
        eighth.push_back(static_cast<int>(col / 32));
      }
      ok = ok && eighth.size() == 8;
      for (int i = 0; ok && i < 8; ++i) ok = eighth[static_cast<size_t>(i)] == i;
    }
    report("golden_text_figure", ok);
  });

  if (failures == 0) {
    std::printf("all criteria passed\n");
    return 0;
  }
  std::printf("%d criteria failed\n", failures);
  return 1;
}
