#pragma once

// Seeded randomness with a fixed, documented algorithm so that generated
// families and vectors are identical on every platform and standard library.

#include "qekr/matrix.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qekr {

/// Uniform integer in [0, bound) by rejection sampling on raw 64-bit draws.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound);

/// Fisher-Yates shuffle: for i = size-1 down to 1, swap item i with item
/// uniform_below(rng, i + 1).
template <class T>
void fisher_yates(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i-- > 1;) {
    std::size_t j = static_cast<std::size_t>(uniform_below(rng, i + 1));
    std::swap(items[i], items[j]);
  }
}

/// Entries p/r with p uniform in [-9, 9] and r uniform in [1, 5], drawn in order
/// numerator then denominator for each coordinate.
RationalVector random_rational_vector(std::size_t length, std::uint64_t seed);

}  // namespace qekr
