#include "qekr/random.hpp"

#include <limits>

namespace qekr {

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

RationalVector random_rational_vector(std::size_t length, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  RationalVector v(length);
  for (auto& x : v) {
    long num = static_cast<long>(uniform_below(rng, 19)) - 9;
    long den = static_cast<long>(uniform_below(rng, 5)) + 1;
    x = Rational(num, den);
    x.canonicalize();
  }
  return v;
}

}  // namespace qekr
