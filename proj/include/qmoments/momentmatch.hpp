#pragma once

#include <string>
#include <vector>

#include "qmoments/ball.hpp"
#include "qmoments/rational.hpp"

namespace qmoments {

// The bases p_1..p_n of the independent discrete variables X_j (X_j uniform
// on {p_j-1, p_j-3, ..., 1-p_j}).  Uniform case: all entries equal.
struct BaseSpec {
  std::vector<long> bases;

  BaseSpec() = default;
  explicit BaseSpec(std::vector<long> b) : bases(std::move(b)) {}
  BaseSpec(long p, int n) : bases(static_cast<size_t>(n), p) {}

  int n() const { return static_cast<int>(bases.size()); }
  bool uniform() const;
  BigInt node_count() const;  // prod p_j
  void validate() const;      // length >= 1, every base >= 2
  std::string label() const;  // "2,3" style
};

enum class SolveMethod { polynomial_roots, newton_mixed };

// Coefficients a_j making sum a_j X_j match the first 2n moments of uniform
// on [-1,1] (exactly, in the uniform case; conjecturally, mixed).  a is
// descending, r ascending with r_j = 1/b_j and b_j = a_j^2.
struct CoefficientSet {
  BaseSpec spec;
  std::vector<Ball> a;
  std::vector<Ball> r;
  std::vector<Ball> b;
  SolveMethod method = SolveMethod::polynomial_roots;
  bool converged = false;
  mpfr_prec_t precision = 0;
};

// Uniform-base construction through the certified roots r_{n,j} of the
// degree-n truncated q-exponential at q = p^2: b_j = 1/r_j, a_j = sqrt(b_j).
CoefficientSet coefficients(long p, int n, mpfr_prec_t precision = 0);

// Residuals of the defining power sums, k = 1..n:
//   sum_j b_j^k - 1/(q^k - 1)   (uniform base, q = p^2).
// Every ball must contain 0.
std::vector<Ball> power_sum_residuals(const CoefficientSet& cs);

// Residuals of the mixed-base system, k = 1..n:
//   sum_j b_j^k (p_j^{2k} - 1) - 1.
// Coincides with the uniform condition when all bases agree; works for any
// CoefficientSet.
std::vector<Ball> mixed_power_residuals(const CoefficientSet& cs);

// k-th moment of X_p (exact; 0 for odd k).
BigRational discrete_uniform_moment(long p, long k);

// k-th moment of Y uniform on [-1,1]: 1/(k+1) for even k, 0 for odd.
BigRational uniform_moment(long k);

// kappa_m from mu_1..mu_M by the triangular recursion
//   kappa_m = mu_m - sum_{i<m} C(m-1, i-1) kappa_i mu_{m-i}.
// Input vector is indexed by moment order with moments[0] = 1; the returned
// vector uses the same indexing (entry 0 unused, set to 0).
std::vector<BigRational> cumulants_from_moments(const std::vector<BigRational>& moments);
std::vector<Ball> cumulants_from_moments(const std::vector<Ball>& moments);

// Residuals kappa_{2k}(X_p) - (p^{2k} - 1) kappa_{2k}(Y) for k = 1..K; the
// computation is exact, so passing means the balls are exact zeros.  For
// p = 2 the sign pattern (-1)^{k+1} kappa_{2k}(X_2) > 0 is also asserted
// (consistency_error on violation).
std::vector<Ball> cumulants_check(long p, int K, mpfr_prec_t precision = 0);

// Damped Newton (exact rational residual/Jacobian at rounded iterates) on
// F_k(b) = sum_j b_j^k (p_j^{2k} - 1) - 1 from the initial guess
// b_j = prod_{m<=j} p_m^{-2}, followed by a Krawczyk-operator verification
// that yields certified enclosures.  converged = true only when the
// enclosures are certified and their residual balls contain 0; otherwise the
// best uncertified iterate is returned with converged = false.
CoefficientSet mixed_base_solve(const BaseSpec& spec, mpfr_prec_t precision = 0);

}  // namespace qmoments
