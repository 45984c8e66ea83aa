#pragma once

// Exact scalar types shared by every module. Nothing in qekr uses floating point
// for mathematical values; timings are the only doubles in the library.

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace qekr {

using Integer = mpz_class;
using Rational = mpq_class;

/// base^exp for exp >= 0.
Integer ipow(long base, unsigned long exp);

/// q^exp as an exact rational; exp may be negative.
Rational qpow(long q, long exp);

/// x(x-1)/2, the binomial C(x,2) extended to all integers.
constexpr long choose2(long x) { return x * (x - 1) / 2; }

/// (-1)^e for any integer e.
constexpr int sign_pow(long e) { return (e % 2 == 0) ? 1 : -1; }

std::string to_string(const Integer& v);
std::string to_string(const Rational& v);

bool fits_int64(const Integer& v);

/// Number of bits of |v| (0 for v == 0).
std::size_t bit_length(const Integer& v);

Integer lcm(const Integer& a, const Integer& b);

}  // namespace qekr
