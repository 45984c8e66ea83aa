#pragma once

// Coefficient algebra behind the degree bound: the coefficients of the two
// quadratic inequalities in ||h_i||^2, their closed-form combinations, the
// auxiliary ratio quantities S_i, T_i, alpha_i, beta_i, and the final
// factorization. All comparisons are exact.

#include "qekr/numeric.hpp"
#include "qekr/report.hpp"

#include <string>
#include <vector>

namespace qekr {

/// lambda_i = (-1)^i q^{C(i,2) - k i} [n-k-i, k-i], the q-Kneser eigenvalues scaled by q^{-k^2}.
Rational kneser_eigenvalue(long n, long k, long i, long q);

/// c = (q^k - q^d)/(q^n - q^k) [n-k, k].
Rational tail_constant(long n, long k, long d, long q);

/// (-1)^r q^{k r + (d-r)^2 - C(r+1,2)} [k-r, d-r][n-d-r, d-r][n-d-r, k-d]: the weight of
/// ||h_r||^2 in (W_{d,k} h)^T W̄_{d,d} (W_{d,k} h).
Integer degree_form_coefficient(long n, long k, long d, long r, long q);

struct CoefficientSet {
  long n = 0, k = 0, d = 0, q = 0;
  std::vector<Rational> a;  // a_i = c + lambda_i, i = 0..d
  std::vector<Rational> b;  // b_i = degree_form_coefficient(n, k, d, i, q)
  Rational c, f, g;
  /// Simplified form of a_1 and the signs of a_1, b_1 (negative for k > d >= 2, n >= 2k+1).
  Report report;
};

/// f = 2 q^{d^2} [k, d][n-d, d][n-d-1, k-d-1], g = q^{d^2} [n, d][n-d, d][n-d-1, k-d-1]^2.
/// Outside k > d >= 2, n >= 2k+1 the report is marked range-extrapolation.
CoefficientSet coefficients(long n, long k, long d, long q);

/// |lambda_i| <= |lambda_{d+1}| < c for k >= i >= d+1, n >= 2k+1, with equality in
/// the first relation exactly when i = d+1.
Report check_eigenvalue_tail(long n, long k, long d, long i, long q);

/// b_0 - a_0 b_1/a_1 = q^{d^2}(q^{k-d}-1)(q^n-1)/((q^k-1)(q^{n-d}-1)) [k,d][n-d,k-d][n-d,d].
Report check_quadratic_coefficient(long n, long k, long d, long q);

/// f - c b_1/a_1 = q^{d^2}(2q^{k+n-d} - q^n - q^{n-d} - q^k - q^{k-d} + 2)
///                 / ((q^k-1)(q^{n-d}-1)) [k,d][n-d-1,k-d-1][n-d,d].
Report check_linear_coefficient(long n, long k, long d, long q);

struct RatioQuantities {
  Rational S, T, alpha, beta;
};

/// S_i(n), T_i(n) and alpha_i, beta_i, each from its own formula. Requires 1 <= i <= d < k.
RatioQuantities ratio_quantities(long n, long k, long d, long i, long q);

/// (q^k - 1) S_i - (q^d - 1) T_i < q^k - q^d, S_i = alpha_i, T_i = beta_i^2/alpha_i, and
/// when i+1 <= d the monotonicity facts alpha_{i+1}/alpha_i = (1-q^{i-k})/(q^{n-k-i}-1) < 1,
/// beta_{i+1}/alpha_{i+1} < beta_i/alpha_i and alpha_i - beta_i > alpha_{i+1} - beta_{i+1}.
/// Range 3 <= i <= d < k, 2k <= n.
Report check_ratio_inequality(long n, long k, long d, long i, long q);

/// b_i < a_i b_1 / a_1 for 2 <= i <= d < k, 2k <= n. Records the parity branch:
/// even i via S_i > T_i, odd i via the ratio inequality.
Report check_coefficient_dominance(long n, long k, long d, long i, long q);

/// With x = |F|: (b_0 - a_0 b_1/a_1) x^2/[n,k] - (f - c b_1/a_1) x + g equals
/// sigma (x - [n-1,k-1]) (x - [n-d-1,k-d-1][n,d]/[k,d]) coefficient by coefficient,
/// sigma = q^{d^2}[k,d][n-d-1,k-d-1][n-d,d]/[n-1,k-1] > 0.
Report check_factorization(long n, long k, long d, long q);

/// The closing step: for x > B = [n,d][n-d-1,k-d-1]/[k,d], positivity of the quadratic
/// forces x > A = [n-1,k-1]. Checks sigma > 0, that A and B are its roots, that the
/// quadratic is negative strictly between them, and records the order of A and B.
Report final_counting_bound(long n, long k, long d, long q);

struct SweepGrid {
  std::vector<long> qs{2, 3, 4, 5};
  long k_max = 7;
  long n_max = 16;
};

/// Every check above over the grid, in a fixed order independent of `jobs`:
/// for each q, k, d, n (and i where applicable).
std::vector<Report> sweep_proofchain(const SweepGrid& grid, int jobs = 1);

/// One line per report: n,k,d,i,q,check,pass,lhs,rhs.
std::string sweep_csv(const std::vector<Report>& reports);

}  // namespace qekr
