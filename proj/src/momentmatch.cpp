#include "qmoments/momentmatch.hpp"

#include <algorithm>
#include <sstream>

#include "qmoments/rootfind.hpp"

namespace qmoments {

namespace {

mpfr_prec_t resolve(mpfr_prec_t prec) { return prec > 0 ? prec : default_precision(); }

BigRational pow2_neg(unsigned long e) {
  BigRational r(1);
  mpz_mul_2exp(mpq_denref(r.get_mpq_t()), mpq_denref(r.get_mpq_t()), e);
  return r;
}

// Nearest representable value at `prec` bits; keeps Newton iterates from
// growing unbounded rational representations while staying exact afterwards.
BigRational round_rational(const BigRational& x, mpfr_prec_t prec) {
  mpfr_t t;
  mpfr_init2(t, prec);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDN);
  BigRational r;
  mpfr_get_q(r.get_mpq_t(), t);
  mpfr_clear(t);
  return r;
}

BigRational inf_norm(const std::vector<BigRational>& v) {
  BigRational m(0);
  for (const auto& x : v) m = std::max(m, rat_abs(x));
  return m;
}

// The mixed-base power-sum system F_k(b) = sum_j b_j^k (p_j^{2k} - 1) - 1,
// k = 1..n, with exact rational residuals and Jacobian.
struct MixedSystem {
  std::vector<long> bases;
  int n = 0;
  std::vector<std::vector<BigInt>> w;  // w[k-1][j] = p_j^{2k} - 1

  explicit MixedSystem(const BaseSpec& spec) : bases(spec.bases), n(spec.n()) {
    w.assign(static_cast<size_t>(n), std::vector<BigInt>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j) {
      const BigInt p2 = BigInt(bases[static_cast<size_t>(j)]) * bases[static_cast<size_t>(j)];
      BigInt acc(1);
      for (int k = 1; k <= n; ++k) {
        acc *= p2;  // p_j^{2k}
        w[static_cast<size_t>(k) - 1][static_cast<size_t>(j)] = acc - 1;
      }
    }
  }

  std::vector<BigRational> residual(const std::vector<BigRational>& b) const {
    std::vector<BigRational> F(static_cast<size_t>(n), BigRational(-1));
    for (int j = 0; j < n; ++j) {
      BigRational bp(1);
      for (int k = 1; k <= n; ++k) {
        bp *= b[static_cast<size_t>(j)];
        F[static_cast<size_t>(k) - 1] +=
            bp * BigRational(w[static_cast<size_t>(k) - 1][static_cast<size_t>(j)]);
      }
    }
    return F;
  }

  std::vector<std::vector<BigRational>> jacobian(const std::vector<BigRational>& b) const {
    std::vector<std::vector<BigRational>> J(
        static_cast<size_t>(n), std::vector<BigRational>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j) {
      BigRational bp(1);  // b_j^{k-1}
      for (int k = 1; k <= n; ++k) {
        J[static_cast<size_t>(k) - 1][static_cast<size_t>(j)] =
            BigRational(k) * bp * BigRational(w[static_cast<size_t>(k) - 1][static_cast<size_t>(j)]);
        bp *= b[static_cast<size_t>(j)];
      }
    }
    return J;
  }

  std::vector<Ball> residual_ball(const std::vector<Ball>& B) const {
    std::vector<Ball> F(static_cast<size_t>(n));
    for (auto& f : F) f = Ball::exact(-1L, B.front().precision());
    for (int j = 0; j < n; ++j) {
      Ball bp = Ball::exact(1L, B[static_cast<size_t>(j)].precision());
      for (int k = 1; k <= n; ++k) {
        bp = bp * B[static_cast<size_t>(j)];
        F[static_cast<size_t>(k) - 1] =
            F[static_cast<size_t>(k) - 1] +
            bp * BigRational(w[static_cast<size_t>(k) - 1][static_cast<size_t>(j)]);
      }
    }
    return F;
  }

  std::vector<std::vector<Ball>> jacobian_ball(const std::vector<Ball>& B) const {
    std::vector<std::vector<Ball>> J(static_cast<size_t>(n), std::vector<Ball>(static_cast<size_t>(n)));
    for (int j = 0; j < n; ++j) {
      Ball bp = Ball::exact(1L, B[static_cast<size_t>(j)].precision());
      for (int k = 1; k <= n; ++k) {
        J[static_cast<size_t>(k) - 1][static_cast<size_t>(j)] =
            bp * (BigRational(k) *
                  BigRational(w[static_cast<size_t>(k) - 1][static_cast<size_t>(j)]));
        bp = bp * B[static_cast<size_t>(j)];
      }
    }
    return J;
  }
};

// Exact Gaussian elimination with partial pivoting.  Throws when the matrix
// is singular (zero pivot column) — for the Newton Jacobian that is reported
// as a precision problem since a tiny perturbation of the iterate removes it.
std::vector<BigRational> solve_linear(std::vector<std::vector<BigRational>> A,
                                      std::vector<BigRational> rhs) {
  const int m = static_cast<int>(A.size());
  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    BigRational best(0);
    for (int row = col; row < m; ++row) {
      const BigRational mag = rat_abs(A[static_cast<size_t>(row)][static_cast<size_t>(col)]);
      if (mag > best) {
        best = mag;
        pivot = row;
      }
    }
    if (pivot < 0) throw precision_error("linear solve: singular Jacobian");
    std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(pivot)]);
    std::swap(rhs[static_cast<size_t>(col)], rhs[static_cast<size_t>(pivot)]);
    for (int row = col + 1; row < m; ++row) {
      if (A[static_cast<size_t>(row)][static_cast<size_t>(col)] == 0) continue;
      const BigRational f = A[static_cast<size_t>(row)][static_cast<size_t>(col)] /
                            A[static_cast<size_t>(col)][static_cast<size_t>(col)];
      for (int c = col; c < m; ++c) {
        A[static_cast<size_t>(row)][static_cast<size_t>(c)] -=
            f * A[static_cast<size_t>(col)][static_cast<size_t>(c)];
      }
      rhs[static_cast<size_t>(row)] -= f * rhs[static_cast<size_t>(col)];
    }
  }
  std::vector<BigRational> x(static_cast<size_t>(m));
  for (int row = m - 1; row >= 0; --row) {
    BigRational acc = rhs[static_cast<size_t>(row)];
    for (int c = row + 1; c < m; ++c) {
      acc -= A[static_cast<size_t>(row)][static_cast<size_t>(c)] * x[static_cast<size_t>(c)];
    }
    x[static_cast<size_t>(row)] = acc / A[static_cast<size_t>(row)][static_cast<size_t>(row)];
  }
  return x;
}

// Exact inverse by Gauss-Jordan; same singularity contract as solve_linear.
std::vector<std::vector<BigRational>> invert(std::vector<std::vector<BigRational>> A) {
  const int m = static_cast<int>(A.size());
  std::vector<std::vector<BigRational>> Inv(static_cast<size_t>(m),
                                            std::vector<BigRational>(static_cast<size_t>(m)));
  for (int i = 0; i < m; ++i) Inv[static_cast<size_t>(i)][static_cast<size_t>(i)] = 1;
  for (int col = 0; col < m; ++col) {
    int pivot = -1;
    BigRational best(0);
    for (int row = col; row < m; ++row) {
      const BigRational mag = rat_abs(A[static_cast<size_t>(row)][static_cast<size_t>(col)]);
      if (mag > best) {
        best = mag;
        pivot = row;
      }
    }
    if (pivot < 0) throw precision_error("matrix inverse: singular Jacobian");
    std::swap(A[static_cast<size_t>(col)], A[static_cast<size_t>(pivot)]);
    std::swap(Inv[static_cast<size_t>(col)], Inv[static_cast<size_t>(pivot)]);
    const BigRational d = A[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int c = 0; c < m; ++c) {
      A[static_cast<size_t>(col)][static_cast<size_t>(c)] /= d;
      Inv[static_cast<size_t>(col)][static_cast<size_t>(c)] /= d;
    }
    for (int row = 0; row < m; ++row) {
      if (row == col) continue;
      const BigRational f = A[static_cast<size_t>(row)][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int c = 0; c < m; ++c) {
        A[static_cast<size_t>(row)][static_cast<size_t>(c)] -=
            f * A[static_cast<size_t>(col)][static_cast<size_t>(c)];
        Inv[static_cast<size_t>(row)][static_cast<size_t>(c)] -=
            f * Inv[static_cast<size_t>(col)][static_cast<size_t>(c)];
      }
    }
  }
  return Inv;
}

}  // namespace

bool BaseSpec::uniform() const {
  for (const long p : bases) {
    if (p != bases.front()) return false;
  }
  return !bases.empty();
}

BigInt BaseSpec::node_count() const {
  BigInt c(1);
  for (const long p : bases) c *= p;
  return c;
}

void BaseSpec::validate() const {
  if (bases.empty()) throw domain_error("BaseSpec: needs at least one base");
  for (const long p : bases) {
    if (p < 2) throw domain_error("BaseSpec: every base must be >= 2");
  }
}

std::string BaseSpec::label() const {
  std::ostringstream os;
  for (size_t i = 0; i < bases.size(); ++i) {
    if (i) os << ',';
    os << bases[i];
  }
  return os.str();
}

CoefficientSet coefficients(long p, int n, mpfr_prec_t precision) {
  const mpfr_prec_t out = resolve(precision);
  const auto roots = roots_all(p, n, out + 32);

  CoefficientSet cs;
  cs.spec = BaseSpec(p, n);
  cs.method = SolveMethod::polynomial_roots;
  cs.precision = out;
  cs.a.reserve(roots.size());
  cs.r.reserve(roots.size());
  cs.b.reserve(roots.size());
  for (const auto& root : roots) {
    const Ball b = root.value.recip();
    cs.r.push_back(root.value.rounded(out));
    cs.b.push_back(b.rounded(out));
    cs.a.push_back(b.sqrt().rounded(out));
  }
  for (size_t j = 0; j + 1 < cs.a.size(); ++j) {
    if (!cs.a[j + 1].strictly_less(cs.a[j])) {
      throw precision_error("coefficients: descending order not certified");
    }
  }
  for (size_t j = 0; j < cs.a.size(); ++j) {
    if (!cs.a[j].is_positive() || !(cs.a[j].pow(2) * cs.r[j]).contains(BigRational(1))) {
      throw consistency_error("coefficients: a_j^2 r_j enclosure lost 1");
    }
  }
  cs.converged = true;
  return cs;
}

std::vector<Ball> power_sum_residuals(const CoefficientSet& cs) {
  if (!cs.spec.uniform()) {
    throw domain_error("power_sum_residuals: requires a uniform-base CoefficientSet");
  }
  const int n = cs.spec.n();
  const BigRational q = BigRational(cs.spec.bases.front()) * cs.spec.bases.front();
  std::vector<Ball> residuals;
  residuals.reserve(static_cast<size_t>(n));
  std::vector<Ball> bp = cs.b;  // b_j^k
  BigRational qpow(1);
  for (int k = 1; k <= n; ++k) {
    qpow *= q;
    Ball sum(cs.b.front().precision());
    for (int j = 0; j < n; ++j) {
      if (k > 1) bp[static_cast<size_t>(j)] = bp[static_cast<size_t>(j)] * cs.b[static_cast<size_t>(j)];
      sum = sum + bp[static_cast<size_t>(j)];
    }
    residuals.push_back(sum - BigRational(1) / (qpow - 1));
  }
  return residuals;
}

std::vector<Ball> mixed_power_residuals(const CoefficientSet& cs) {
  cs.spec.validate();
  const MixedSystem sys(cs.spec);
  return sys.residual_ball(cs.b);
}

BigRational discrete_uniform_moment(long p, long k) {
  if (p < 2) throw domain_error("discrete_uniform_moment: requires p >= 2");
  if (k < 0) throw domain_error("discrete_uniform_moment: requires k >= 0");
  if (k % 2 == 1) return BigRational(0);
  BigInt sum(0);
  for (long i = 0; i < p; ++i) {
    const BigInt v(p - 1 - 2 * i);
    sum += int_pow(v, static_cast<unsigned long>(k));
  }
  return BigRational(sum) / p;
}

BigRational uniform_moment(long k) {
  if (k < 0) throw domain_error("uniform_moment: requires k >= 0");
  if (k % 2 == 1) return BigRational(0);
  return BigRational(1, static_cast<unsigned long>(k) + 1);
}

std::vector<BigRational> cumulants_from_moments(const std::vector<BigRational>& moments) {
  if (moments.empty() || moments.front() != 1) {
    throw domain_error("cumulants_from_moments: moments[0] must be 1");
  }
  const size_t M = moments.size() - 1;
  std::vector<BigRational> kappa(M + 1, BigRational(0));
  for (size_t m = 1; m <= M; ++m) {
    BigRational acc = moments[m];
    for (size_t i = 1; i < m; ++i) {
      acc -= BigRational(binomial(static_cast<unsigned long>(m) - 1,
                                  static_cast<unsigned long>(i) - 1)) *
             kappa[i] * moments[m - i];
    }
    kappa[m] = acc;
  }
  return kappa;
}

std::vector<Ball> cumulants_from_moments(const std::vector<Ball>& moments) {
  if (moments.empty() || !moments.front().contains(BigRational(1))) {
    throw domain_error("cumulants_from_moments: moments[0] must contain 1");
  }
  const size_t M = moments.size() - 1;
  const mpfr_prec_t prec = moments.front().precision();
  std::vector<Ball> kappa(M + 1, Ball(prec));
  for (size_t m = 1; m <= M; ++m) {
    Ball acc = moments[m];
    for (size_t i = 1; i < m; ++i) {
      acc = acc - kappa[i] * moments[m - i] *
                      BigRational(binomial(static_cast<unsigned long>(m) - 1,
                                           static_cast<unsigned long>(i) - 1));
    }
    kappa[m] = acc;
  }
  return kappa;
}

std::vector<Ball> cumulants_check(long p, int K, mpfr_prec_t precision) {
  if (p < 2) throw domain_error("cumulants_check: requires p >= 2");
  if (K < 1) throw domain_error("cumulants_check: requires K >= 1");
  const mpfr_prec_t out = resolve(precision);
  const long M = 2L * K;

  std::vector<BigRational> mx, my;
  mx.reserve(static_cast<size_t>(M) + 1);
  my.reserve(static_cast<size_t>(M) + 1);
  for (long m = 0; m <= M; ++m) {
    mx.push_back(discrete_uniform_moment(p, m));
    my.push_back(uniform_moment(m));
  }
  const auto kx = cumulants_from_moments(mx);
  const auto ky = cumulants_from_moments(my);

  std::vector<Ball> residuals;
  residuals.reserve(static_cast<size_t>(K));
  const BigRational q = BigRational(p) * p;  // p^2
  for (int k = 1; k <= K; ++k) {
    const BigRational factor = rat_pow(q, k) - 1;  // p^{2k} - 1
    const BigRational res = kx[static_cast<size_t>(2 * k)] - factor * ky[static_cast<size_t>(2 * k)];
    residuals.push_back(Ball::exact(res, out));
    if (p == 2) {
      const BigRational signed_kappa =
          (k % 2 == 1) ? kx[static_cast<size_t>(2 * k)] : BigRational(-kx[static_cast<size_t>(2 * k)]);
      if (!(signed_kappa > 0)) {
        throw consistency_error("cumulants_check: sign pattern (-1)^{k+1} kappa_{2k}(X_2) > 0 failed");
      }
    }
  }
  return residuals;
}

CoefficientSet mixed_base_solve(const BaseSpec& spec, mpfr_prec_t precision) {
  spec.validate();
  const mpfr_prec_t out = resolve(precision);
  const mpfr_prec_t work = out + 64;
  const MixedSystem sys(spec);
  const int n = sys.n;

  // Initial guess b_j = prod_{m<=j} p_m^{-2}.
  std::vector<BigRational> b(static_cast<size_t>(n));
  BigRational acc(1);
  for (int j = 0; j < n; ++j) {
    acc /= BigRational(spec.bases[static_cast<size_t>(j)]) * spec.bases[static_cast<size_t>(j)];
    b[static_cast<size_t>(j)] = acc;
  }

  auto F = sys.residual(b);
  BigRational fnorm = inf_norm(F);
  const BigRational tol = pow2_neg(static_cast<unsigned long>(work - 16));

  for (int iter = 0; iter < 100 && fnorm > tol; ++iter) {
    const auto delta = solve_linear(sys.jacobian(b), F);
    bool accepted = false;
    BigRational t(1);
    for (int halving = 0; halving < 40; ++halving) {
      std::vector<BigRational> trial(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) {
        trial[static_cast<size_t>(j)] =
            round_rational(b[static_cast<size_t>(j)] - t * delta[static_cast<size_t>(j)], work);
      }
      auto Ft = sys.residual(trial);
      const BigRational ftn = inf_norm(Ft);
      if (ftn < fnorm) {
        b = std::move(trial);
        F = std::move(Ft);
        fnorm = ftn;
        accepted = true;
        break;
      }
      t /= 2;
    }
    if (!accepted) break;  // stalled: rounding floor reached
  }

  CoefficientSet cs;
  cs.spec = spec;
  cs.method = SolveMethod::newton_mixed;
  cs.precision = out;
  cs.converged = false;

  std::vector<Ball> bBalls;
  if (fnorm <= tol) {
    // Krawczyk verification around the numeric solution: with Y an exact
    // inverse of the Jacobian at b and B a box around b,
    //   K = b - Y F(b) + (I - Y J(B)) (B - b)
    // maps any true root in B into K; K strictly inside B proves existence
    // (and gives the enclosure).  Inflate the box a few times if needed.
    const auto Y = invert(sys.jacobian(b));
    std::vector<BigRational> yf(static_cast<size_t>(n), BigRational(0));
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n; ++m) {
        yf[static_cast<size_t>(j)] +=
            Y[static_cast<size_t>(j)][static_cast<size_t>(m)] * F[static_cast<size_t>(m)];
      }
    }
    BigRational scale(0);
    for (int j = 0; j < n; ++j) {
      scale = std::max(scale, rat_abs(b[static_cast<size_t>(j)]));
    }
    BigRational rho = BigRational(4) * inf_norm(yf) + scale * pow2_neg(static_cast<unsigned long>(out + 16));
    for (int attempt = 0; attempt < 6 && !cs.converged; ++attempt, rho *= 256) {
      std::vector<Ball> B;
      B.reserve(static_cast<size_t>(n));
      for (int j = 0; j < n; ++j) {
        B.push_back(Ball::from_endpoints(b[static_cast<size_t>(j)] - rho,
                                         b[static_cast<size_t>(j)] + rho, work));
      }
      const auto JB = sys.jacobian_ball(B);
      const Ball D = Ball::from_endpoints(-rho, rho, work);
      std::vector<Ball> K;
      K.reserve(static_cast<size_t>(n));
      bool inside = true;
      for (int j = 0; j < n; ++j) {
        Ball kj = Ball::exact(b[static_cast<size_t>(j)] - yf[static_cast<size_t>(j)], work);
        for (int m = 0; m < n; ++m) {
          Ball mjm(work);  // (I - Y J(B))_{jm}
          mjm = Ball::exact(j == m ? BigRational(1) : BigRational(0), work);
          for (int l = 0; l < n; ++l) {
            mjm = mjm - JB[static_cast<size_t>(l)][static_cast<size_t>(m)] *
                            Y[static_cast<size_t>(j)][static_cast<size_t>(l)];
          }
          kj = kj + mjm * D;
        }
        if (!B[static_cast<size_t>(j)].interior_contains(kj)) {
          inside = false;
        }
        K.push_back(std::move(kj));
      }
      if (inside) {
        bBalls = std::move(K);
        cs.converged = true;
      }
    }
  }

  if (cs.converged) {
    // Certified: double-check residual enclosures straddle 0.
    for (const auto& res : sys.residual_ball(bBalls)) {
      if (!res.contains_zero()) {
        throw consistency_error("mixed_base_solve: certified enclosure lost the residual zero");
      }
    }
  } else {
    // Best uncertified iterate with a heuristic radius.
    const BigRational pad = BigRational(4) * fnorm + pow2_neg(static_cast<unsigned long>(out));
    bBalls.reserve(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      bBalls.push_back(Ball::exact(b[static_cast<size_t>(j)], work).padded(pad));
    }
  }

  cs.b.reserve(static_cast<size_t>(n));
  cs.r.reserve(static_cast<size_t>(n));
  cs.a.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    Ball bj = bBalls[static_cast<size_t>(j)].rounded(out);
    if (!bj.is_positive()) {
      if (cs.converged) {
        throw consistency_error("mixed_base_solve: certified b_j not positive");
      }
      // Uncertified fallback: clamp into [0, upper] so sqrt stays defined.
      bj = Ball::from_endpoints(BigRational(0),
                                std::max(BigRational(0), bj.upper_rational()), out);
    }
    cs.b.push_back(bj);
    // When b_j straddles 0 its reciprocal is undefined; publish a deliberately
    // useless enclosure so no digit of r_j prints as certified.
    cs.r.push_back(bj.is_positive()
                       ? bj.recip().rounded(out)
                       : Ball::from_endpoints(BigRational(0), BigRational(1000000000), out));
    cs.a.push_back(bj.sqrt().rounded(out));
  }
  if (cs.converged) {
    for (int j = 0; j + 1 < n; ++j) {
      if (!cs.a[static_cast<size_t>(j) + 1].strictly_less(cs.a[static_cast<size_t>(j)])) {
        throw consistency_error("mixed_base_solve: a_j not certified descending");
      }
    }
  }
  return cs;
}

}  // namespace qmoments
