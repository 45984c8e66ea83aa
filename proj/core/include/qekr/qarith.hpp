#pragma once

// Gaussian binomials, q-brackets and truncated power series with exact
// rational coefficients, plus checks of the q-binomial theorem identities.

#include "qekr/numeric.hpp"
#include "qekr/report.hpp"

#include <cstddef>
#include <vector>

namespace qekr {

/// True iff q = p^e with p prime and e >= 1. Optionally reports p and e.
bool is_prime_power(long q, long* prime = nullptr, int* exponent = nullptr);

/// Throws std::invalid_argument unless q is a prime power.
void require_prime_power(long q);

/// Gaussian binomial [m, k]_q with the conventions [m, 0] = 1 and [m, k] = 0 for k < 0.
/// Requires m >= 0 whenever k >= 1. Each partial product [m, t] is formed by an
/// exact division whose remainder is checked.
Integer gauss_binom(long m, long k, long q);

/// [x]_i = prod_{j=0}^{i-1} (q^{x-j} - 1). Every exponent x-j must be >= 0.
Integer bracket(long x, long i, long q);

/// Power series c_0 + c_1 z + ... + c_N z^N, exact through degree N.
class TruncatedSeries {
 public:
  explicit TruncatedSeries(std::size_t truncation);
  TruncatedSeries(std::vector<Rational> coefficients, std::size_t truncation);

  std::size_t truncation() const { return coeffs_.size() - 1; }
  const Rational& operator[](std::size_t i) const { return coeffs_.at(i); }
  Rational& operator[](std::size_t i) { return coeffs_.at(i); }
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  /// Product truncated to min of both truncations.
  friend TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b);
  friend bool operator==(const TruncatedSeries& a, const TruncatedSeries& b);

  /// 1/s; throws std::domain_error if the constant term is zero.
  TruncatedSeries reciprocal() const;

 private:
  std::vector<Rational> coeffs_;
};

/// Polynomial prod_{i=0}^{m-1} (1 - q^i z) expanded into integer coefficients.
std::vector<Integer> q_pochhammer_polynomial(long m, long q);

/// Evaluates a polynomial with integer coefficients at a rational point.
Rational evaluate(const std::vector<Integer>& poly, const Rational& z);

/// Checks prod_{i<m}(1 - q^i z) = sum_j (-1)^j q^{C(j,2)} [m, j] z^j coefficient-wise and
/// at z, and 1/prod_{i<m}(1 - q^i z) = sum_j [m+j-1, j] z^j through degree N.
Report check_q_binomial_identities(long m, long q, const Rational& z, std::size_t truncation);

/// sum_{i=r}^{d} (-1)^{i-r} q^{C(i-r,2)} [d-r, i-r][n-i-r, d-i] = q^{(d-r)^2}[n-d-r, d-r].
Report check_alternating_sum(long n, long d, long r, long q);

}  // namespace qekr
