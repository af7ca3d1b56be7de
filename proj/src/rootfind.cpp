#include "qmoments/rootfind.hpp"

#include <string>

namespace qmoments {

namespace {

mpfr_prec_t resolve(mpfr_prec_t prec) { return prec > 0 ? prec : default_precision(); }

// Integer-cleared coefficient vector: c_k = (q; q)_n / (q; q)_k, obtained by
// the descending product c_{k-1} = c_k (1 - q^k).  For integer q these are
// integers, and sum c_k x^k has the same roots as the truncation while its
// sign differs by sign((q; q)_n) = (-1)^n.
struct ClearedPoly {
  std::vector<BigInt> c;
  int parity_sign = 1;  // (-1)^n

  explicit ClearedPoly(const QPolynomial& poly) {
    if (poly.q.get_den() != 1 || poly.q <= 1) {
      throw domain_error("cleared polynomial requires integer q > 1");
    }
    const BigInt q = poly.q.get_num();
    const int n = poly.degree();
    c.assign(static_cast<size_t>(n) + 1, BigInt(0));
    c[static_cast<size_t>(n)] = 1;
    BigInt qpow = int_pow(q, static_cast<unsigned long>(n));  // q^k
    for (int k = n; k >= 1; --k) {
      c[static_cast<size_t>(k) - 1] = c[static_cast<size_t>(k)] * (BigInt(1) - qpow);
      mpz_divexact(qpow.get_mpz_t(), qpow.get_mpz_t(), q.get_mpz_t());
    }
    parity_sign = (n % 2 == 0) ? 1 : -1;
  }

  // Exact sign of the truncation at x = num/den (den > 0): Horner over the
  // integers on den^n * sum c_k (num/den)^k, using a running power of den.
  int sign_at(const BigRational& x) const {
    const BigInt num(mpq_numref(x.get_mpq_t()));
    const BigInt den(mpq_denref(x.get_mpq_t()));
    const int n = static_cast<int>(c.size()) - 1;
    BigInt acc = c[static_cast<size_t>(n)];
    BigInt dpow(1);
    for (int k = n - 1; k >= 0; --k) {
      dpow *= den;  // den^{n-k}
      acc = acc * num + c[static_cast<size_t>(k)] * dpow;
    }
    return sgn(acc) * parity_sign;
  }
};

}  // namespace

int sign_at(const QPolynomial& poly, const BigRational& x) {
  return ClearedPoly(poly).sign_at(x);
}

std::vector<RootBracket> bracket_roots(const QPolynomial& poly, long p) {
  if (p < 2) throw domain_error("bracket_roots: requires p >= 2");
  if (poly.q != BigRational(p) * p) {
    throw domain_error("bracket_roots: polynomial must have q = p^2");
  }
  const int n = poly.degree();
  if (n < 1) throw domain_error("bracket_roots: requires degree >= 1");

  // Sign alternation at x = p^{2k+1}, k = 0..n: positive at p, then strictly
  // alternating.  This pins exactly one root in each gap.
  const ClearedPoly cp(poly);
  std::vector<int> signs(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    const BigRational x(int_pow(BigInt(p), static_cast<unsigned long>(2 * k + 1)));
    const int s = cp.sign_at(x);
    const int expected = (k % 2 == 0) ? 1 : -1;
    if (s != expected) {
      throw consistency_error("bracket_roots: sign alternation failed at p^" +
                              std::to_string(2 * k + 1));
    }
    signs[static_cast<size_t>(k)] = s;
  }

  std::vector<RootBracket> brackets;
  brackets.reserve(static_cast<size_t>(n));
  for (int j = 1; j <= n; ++j) {
    RootBracket br;
    br.lo = BigRational(int_pow(BigInt(p), static_cast<unsigned long>(2 * j - 1)));
    br.hi = BigRational(int_pow(BigInt(p), static_cast<unsigned long>(2 * j + 1)));
    br.sign_lo = signs[static_cast<size_t>(j) - 1];
    br.sign_hi = signs[static_cast<size_t>(j)];
    br.index = j;
    brackets.push_back(std::move(br));
  }
  return brackets;
}

CertifiedRoot refine_root(const QPolynomial& poly, const RootBracket& bracket,
                          mpfr_prec_t prec) {
  const mpfr_prec_t out = resolve(prec);
  if (bracket.sign_lo == 0 || bracket.sign_hi == 0 || bracket.sign_lo == bracket.sign_hi) {
    throw domain_error("refine_root: bracket endpoints must have opposite nonzero signs");
  }
  const ClearedPoly cp(poly);

  BigRational lo = bracket.lo;
  BigRational hi = bracket.hi;
  const int sign_lo = bracket.sign_lo;

  // Width target 2^{-prec} * max(1, |root|); the initial lower endpoint is a
  // valid magnitude lower bound since the bracket sits on the positive axis.
  BigRational tol = std::max(BigRational(1), lo);
  mpz_mul_2exp(mpq_denref(tol.get_mpq_t()), mpq_denref(tol.get_mpq_t()),
               static_cast<unsigned long>(out));
  mpq_canonicalize(tol.get_mpq_t());

  while (hi - lo > tol) {
    const BigRational mid = (lo + hi) / 2;
    const int s = cp.sign_at(mid);
    if (s == 0) {
      lo = mid;  // landed exactly on a rational root
      hi = mid;
      break;
    }
    if (s == sign_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  CertifiedRoot root;
  root.value = Ball::from_endpoints(lo, hi, out);
  root.index = bracket.index;
  root.bracket = bracket;
  return root;
}

std::vector<CertifiedRoot> roots_all(long p, int n, mpfr_prec_t prec) {
  const mpfr_prec_t out = resolve(prec);
  const QPolynomial poly = truncated_q_exponential(BigRational(p) * p, n);
  const auto brackets = bracket_roots(poly, p);
  std::vector<CertifiedRoot> roots;
  roots.reserve(brackets.size());
  for (const auto& br : brackets) {
    roots.push_back(refine_root(poly, br, out));
  }
  for (size_t i = 0; i + 1 < roots.size(); ++i) {
    if (!roots[i].value.strictly_less(roots[i + 1].value)) {
      throw consistency_error("roots_all: enclosures failed strict separation");
    }
  }
  return roots;
}

}  // namespace qmoments
