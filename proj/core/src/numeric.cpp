#include "qekr/numeric.hpp"

#include <stdexcept>

namespace qekr {

Integer ipow(long base, unsigned long exp) {
  Integer result;
  Integer b = base;
  mpz_pow_ui(result.get_mpz_t(), b.get_mpz_t(), exp);
  return result;
}

Rational qpow(long q, long exp) {
  if (q == 0 && exp < 0) throw std::domain_error("qpow: zero to a negative power");
  if (exp >= 0) return Rational(ipow(q, static_cast<unsigned long>(exp)));
  Rational r(Integer(1), ipow(q, static_cast<unsigned long>(-exp)));
  r.canonicalize();
  return r;
}

std::string to_string(const Integer& v) { return v.get_str(); }

std::string to_string(const Rational& v) {
  Rational c = v;
  c.canonicalize();
  return c.get_str();
}

bool fits_int64(const Integer& v) {
  return mpz_fits_slong_p(v.get_mpz_t()) != 0;
}

std::size_t bit_length(const Integer& v) {
  if (sgn(v) == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

Integer lcm(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace qekr
