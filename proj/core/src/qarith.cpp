#include "qekr/qarith.hpp"

#include <stdexcept>
#include <string>

namespace qekr {

bool is_prime_power(long q, long* prime, int* exponent) {
  if (q < 2) return false;
  long p = 0;
  for (long f = 2; f * f <= q; ++f) {
    if (q % f == 0) {
      p = f;
      break;
    }
  }
  if (p == 0) p = q;
  int e = 0;
  long rest = q;
  while (rest % p == 0) {
    rest /= p;
    ++e;
  }
  if (rest != 1) return false;
  if (prime) *prime = p;
  if (exponent) *exponent = e;
  return true;
}

void require_prime_power(long q) {
  if (!is_prime_power(q))
    throw std::invalid_argument("q = " + std::to_string(q) + " is not a prime power");
}

Integer gauss_binom(long m, long k, long q) {
  require_prime_power(q);
  if (k < 0) return 0;
  if (k == 0) return 1;
  if (m < 0)
    throw std::invalid_argument("gauss_binom: negative m = " + std::to_string(m) +
                                " with k = " + std::to_string(k));
  if (m < k) return 0;
  // [m, t] = [m, t-1] (q^{m-t+1} - 1) / (q^t - 1); every step is an integer.
  Integer value = 1;
  for (long t = 1; t <= k; ++t) {
    Integer num = ipow(q, static_cast<unsigned long>(m - t + 1)) - 1;
    Integer den = ipow(q, static_cast<unsigned long>(t)) - 1;
    value *= num;
    Integer quot, rem;
    mpz_tdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), value.get_mpz_t(), den.get_mpz_t());
    if (sgn(rem) != 0)
      throw std::logic_error("gauss_binom: inexact division at step " + std::to_string(t));
    value = quot;
  }
  return value;
}

Integer bracket(long x, long i, long q) {
  if (i < 0) throw std::invalid_argument("bracket: negative length");
  if (i > 0 && x - (i - 1) < 0)
    throw std::invalid_argument("bracket: negative exponent in [" + std::to_string(x) + "]_" +
                                std::to_string(i));
  Integer value = 1;
  for (long j = 0; j < i; ++j) value *= ipow(q, static_cast<unsigned long>(x - j)) - 1;
  return value;
}

TruncatedSeries::TruncatedSeries(std::size_t truncation) : coeffs_(truncation + 1) {}

TruncatedSeries::TruncatedSeries(std::vector<Rational> coefficients, std::size_t truncation)
    : coeffs_(truncation + 1) {
  for (std::size_t i = 0; i < coefficients.size() && i <= truncation; ++i)
    coeffs_[i] = coefficients[i];
}

TruncatedSeries operator*(const TruncatedSeries& a, const TruncatedSeries& b) {
  std::size_t n = std::min(a.truncation(), b.truncation());
  TruncatedSeries out(n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (sgn(a.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; i + j <= n; ++j) out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return out;
}

bool operator==(const TruncatedSeries& a, const TruncatedSeries& b) {
  return a.coeffs_ == b.coeffs_;
}

TruncatedSeries TruncatedSeries::reciprocal() const {
  if (sgn(coeffs_[0]) == 0) throw std::domain_error("reciprocal of a series with zero constant");
  std::size_t n = truncation();
  TruncatedSeries out(n);
  out.coeffs_[0] = 1 / coeffs_[0];
  for (std::size_t i = 1; i <= n; ++i) {
    Rational acc = 0;
    for (std::size_t j = 1; j <= i; ++j) acc += coeffs_[j] * out.coeffs_[i - j];
    out.coeffs_[i] = -acc / coeffs_[0];
  }
  return out;
}

std::vector<Integer> q_pochhammer_polynomial(long m, long q) {
  std::vector<Integer> poly{1};
  for (long i = 0; i < m; ++i) {
    Integer qi = ipow(q, static_cast<unsigned long>(i));
    std::vector<Integer> next(poly.size() + 1);
    for (std::size_t t = 0; t < poly.size(); ++t) {
      next[t] += poly[t];
      next[t + 1] -= qi * poly[t];
    }
    poly = std::move(next);
  }
  return poly;
}

Rational evaluate(const std::vector<Integer>& poly, const Rational& z) {
  Rational acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * z + Rational(*it);
  return acc;
}

Report check_q_binomial_identities(long m, long q, const Rational& z, std::size_t truncation) {
  Report rep("q_binomial_identities",
             json{{"m", m}, {"q", q}, {"z", to_string(z)}, {"N", truncation}});
  ReportTimer timer(rep);
  require_prime_power(q);
  if (m < 1) throw std::invalid_argument("check_q_binomial_identities: m must be >= 1");
  if (truncation < static_cast<std::size_t>(m)) {
    rep.status = Status::error;
    rep.fail("truncation N < m: the series cannot carry the degree-m product",
             json{{"N", truncation}, {"m", m}});
    return rep;
  }

  // (a) finite product, coefficient-wise
  auto product = q_pochhammer_polynomial(m, q);
  std::vector<Integer> expansion(static_cast<std::size_t>(m) + 1);
  for (long j = 0; j <= m; ++j)
    expansion[j] = sign_pow(j) * ipow(q, choose2(j)) * gauss_binom(m, j, q);
  Integer max_residual = 0;
  for (long j = 0; j <= m; ++j) {
    Integer res = abs(product[j] - expansion[j]);
    if (res > max_residual) max_residual = res;
    if (sgn(res) != 0)
      rep.fail_residual("product expansion mismatch",
                        json{{"part", "a"}, {"coefficient", j},
                             {"product", to_string(product[j])},
                             {"sum", to_string(expansion[j])}});
  }
  // (a) at the sample point
  Rational at_z_product = 1;
  for (long i = 0; i < m; ++i) at_z_product *= 1 - Rational(ipow(q, i)) * z;
  Rational at_z_sum = evaluate(expansion, z);
  if (at_z_product != at_z_sum)
    rep.fail_residual("product expansion mismatch at z",
                      json{{"part", "a"}, {"product", to_string(at_z_product)},
                           {"sum", to_string(at_z_sum)}});

  // (b) reciprocal series
  std::vector<Rational> prod_coeffs(product.begin(), product.end());
  TruncatedSeries denominator(prod_coeffs, truncation);
  TruncatedSeries inverse = denominator.reciprocal();
  Rational max_series_residual = 0;
  for (std::size_t j = 0; j <= truncation; ++j) {
    Rational expected(gauss_binom(m + static_cast<long>(j) - 1, static_cast<long>(j), q));
    Rational res = abs(inverse[j] - expected);
    if (res > max_series_residual) max_series_residual = res;
    if (sgn(res) != 0)
      rep.fail_residual("reciprocal series mismatch",
                        json{{"part", "b"}, {"coefficient", j},
                             {"series", to_string(inverse[j])},
                             {"expected", to_string(expected)}});
  }
  rep.values["max_residual_a"] = to_string(max_residual);
  rep.values["max_residual_b"] = to_string(max_series_residual);
  rep.values["value_at_z"] = to_string(at_z_product);
  return rep;
}

Report check_alternating_sum(long n, long d, long r, long q) {
  Report rep("alternating_sum_identity", json{{"n", n}, {"d", d}, {"r", r}, {"q", q}});
  ReportTimer timer(rep);
  require_prime_power(q);
  if (r < 0 || r > d || n < 2 * d)
    throw std::invalid_argument("check_alternating_sum: requires 0 <= r <= d and n >= 2d");
  Integer lhs = 0;
  for (long i = r; i <= d; ++i)
    lhs += sign_pow(i - r) * ipow(q, choose2(i - r)) * gauss_binom(d - r, i - r, q) *
           gauss_binom(n - i - r, d - i, q);
  Integer rhs = ipow(q, (d - r) * (d - r)) * gauss_binom(n - d - r, d - r, q);
  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  rep.values["residual"] = to_string(Integer(lhs - rhs));
  if (lhs != rhs) rep.fail_residual("alternating sum differs from closed form");
  return rep;
}

}  // namespace qekr
