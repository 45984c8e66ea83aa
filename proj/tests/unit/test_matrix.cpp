#include "qekr/matrix.hpp"
#include "qekr/random.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qekr;

namespace {

IntMatrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& rng, long lo, long hi) {
  IntMatrix m(IndexSpace::plain(rows), IndexSpace::plain(cols));
  std::uniform_int_distribution<long> dist(lo, hi);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = dist(rng);
  return m;
}

IntMatrix naive_product(const IntMatrix& a, const IntMatrix& b) {
  IntMatrix out(a.row_space(), b.col_space());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < b.cols(); ++c) {
      Integer s = 0;
      for (std::size_t t = 0; t < a.cols(); ++t) s += a(r, t) * b(t, c);
      out(r, c) = s;
    }
  return out;
}

Incidence random_incidence(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::vector<std::vector<std::uint32_t>> lists(rows);
  std::bernoulli_distribution coin(0.3);
  for (auto& l : lists)
    for (std::uint32_t c = 0; c < cols; ++c)
      if (coin(rng)) l.push_back(c);
  return Incidence(IndexSpace::plain(rows), IndexSpace::plain(cols), std::move(lists));
}

}  // namespace

TEST(IntMatrix, ProductMatchesNaiveAcrossKernels) {
  std::mt19937_64 rng(1);
  // small entries (64-bit kernel), medium (128-bit), large (big integers)
  for (long bound : {10L, 3000000000L}) {
    auto a = random_matrix(7, 9, rng, -bound, bound);
    auto b = random_matrix(9, 5, rng, -bound, bound);
    EXPECT_EQ(multiply(a, b), naive_product(a, b));
    EXPECT_EQ(multiply(a, b, 3), naive_product(a, b));
  }
  auto a = random_matrix(4, 4, rng, -5, 5);
  Integer huge = ipow(10, 40);
  a(1, 2) = huge;
  auto b = random_matrix(4, 3, rng, -5, 5);
  b(2, 0) = -huge;
  EXPECT_EQ(multiply(a, b), naive_product(a, b));
}

TEST(IntMatrix, RefusesMismatchedSpaces) {
  IntMatrix a(IndexSpace::plain(3), IndexSpace::plain(4));
  IntMatrix b(IndexSpace::plain(3), IndexSpace::plain(4));
  EXPECT_THROW(multiply(a, b), IndexSpaceMismatch);
  IntMatrix c(IndexSpace::plain(4), IndexSpace::plain(3));
  EXPECT_THROW(a += c, IndexSpaceMismatch);
}

TEST(IntMatrix, BasicOperations) {
  std::mt19937_64 rng(2);
  auto a = random_matrix(5, 5, rng, -9, 9);
  auto t = a.transpose();
  for (std::size_t r = 0; r < 5; ++r)
    for (std::size_t c = 0; c < 5; ++c) EXPECT_EQ(t(r, c), a(c, r));
  EXPECT_TRUE((a + t).is_symmetric());
  EXPECT_TRUE((a - a).is_zero());
  Integer tr = 0;
  for (std::size_t i = 0; i < 5; ++i) tr += a(i, i);
  EXPECT_EQ(a.trace(), tr);
  auto id = IntMatrix::identity(IndexSpace::plain(5));
  EXPECT_EQ(multiply(a, id), a);
  auto twice = a;
  twice.add_scaled(1, a);
  EXPECT_EQ(twice, Integer(2) * a);
  auto m = first_mismatch(a, twice);
  ASSERT_TRUE(m.has_value() || a.is_zero());
}

TEST(RationalMatrix, EqualityIgnoresScaling) {
  std::mt19937_64 rng(3);
  auto a = random_matrix(3, 3, rng, -9, 9);
  RationalMatrix x(a, 2);
  RationalMatrix y(Integer(3) * a, 6);
  EXPECT_TRUE(x == y);
  EXPECT_EQ(x(1, 1), Rational(a(1, 1), 2));
  EXPECT_FALSE(first_mismatch(x, y).has_value());
  RationalMatrix z(a, 3);
  if (!a.is_zero()) EXPECT_TRUE(first_mismatch(x, z).has_value());
}

TEST(RationalMatrix, CombineUsesCommonDenominator) {
  std::mt19937_64 rng(4);
  auto a = random_matrix(3, 4, rng, -9, 9);
  auto b = random_matrix(3, 4, rng, -9, 9);
  std::vector<ScaledTerm> terms{{Rational(1, 2), &a}, {Rational(-2, 3), &b}};
  auto c = combine(terms);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t col = 0; col < 4; ++col)
      EXPECT_EQ(c(r, col), Rational(1, 2) * a(r, col) - Rational(2, 3) * b(r, col));
}

TEST(Incidence, ProductsMatchDense) {
  std::mt19937_64 rng(5);
  auto a = random_incidence(6, 8, rng);
  auto b = random_incidence(8, 7, rng);
  auto c = random_incidence(6, 5, rng);
  EXPECT_EQ(multiply(a, b), naive_product(a.to_dense(), b.to_dense()));
  EXPECT_EQ(multiply_transposed(a, c), naive_product(a.to_dense().transpose(), c.to_dense()));
  auto x = random_matrix(8, 3, rng, -50, 50);
  EXPECT_EQ(multiply(a, x), naive_product(a.to_dense(), x));
  auto y = random_matrix(6, 3, rng, -50, 50);
  EXPECT_EQ(multiply_transposed(a, y, 2), naive_product(a.to_dense().transpose(), y));
  EXPECT_EQ(a.transpose().to_dense(), a.to_dense().transpose());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t col = 0; col < a.cols(); ++col) EXPECT_EQ(a.contains(r, col), a.to_dense()(r, col) == 1);
}

TEST(Incidence, VectorProducts) {
  std::mt19937_64 rng(6);
  auto a = random_incidence(5, 9, rng);
  auto v = random_rational_vector(9, 11);
  auto w = random_rational_vector(5, 12);
  auto av = qekr::apply(a, std::span<const Rational>(v));
  auto atw = apply_transposed(a, std::span<const Rational>(w));
  // <w, A v> = <A^T w, v>
  EXPECT_EQ(dot(w, av), dot(atw, v));
  auto dense = a.to_dense();
  for (std::size_t r = 0; r < 5; ++r) {
    Rational s = 0;
    for (std::size_t c = 0; c < 9; ++c) s += dense(r, c) * v[c];
    EXPECT_EQ(av[r], s);
  }
}

TEST(Incidence, RejectsBadRows) {
  EXPECT_THROW(Incidence(IndexSpace::plain(1), IndexSpace::plain(3), {{0, 5}}), std::invalid_argument);
  EXPECT_THROW(Incidence(IndexSpace::plain(1), IndexSpace::plain(3), {{1, 1}}), std::invalid_argument);
  EXPECT_THROW(Incidence(IndexSpace::plain(2), IndexSpace::plain(3), {{1}}), std::invalid_argument);
}

TEST(Rank, ModularBareissAndKnownRanks) {
  std::mt19937_64 rng(7);
  // rank-2 product of 6x2 and 2x6 factors
  auto u = random_matrix(6, 2, rng, -9, 9);
  auto v = random_matrix(2, 6, rng, -9, 9);
  auto low = multiply(u, v);
  EXPECT_EQ(rank_bareiss(low), 2u);
  EXPECT_EQ(rank_over_rationals(low).rank, 2u);
  EXPECT_FALSE(rank_over_rationals(low).full_by_modular);
  EXPECT_EQ(rank_bareiss(IntMatrix::identity(IndexSpace::plain(4))), 4u);
  EXPECT_EQ(rank_bareiss(IntMatrix(IndexSpace::plain(3), IndexSpace::plain(3))), 0u);
  // a matrix singular mod 2^31-1 but invertible over Q
  IntMatrix m(IndexSpace::plain(2), IndexSpace::plain(2));
  m(0, 0) = 2147483647;
  m(1, 1) = 1;
  EXPECT_EQ(rank_mod_prime(m), 1u);
  EXPECT_EQ(rank_over_rationals(m).rank, 2u);
  auto ones = IntMatrix::ones(IndexSpace::plain(3), IndexSpace::plain(5));
  EXPECT_EQ(rank_over_rationals(ones).rank, 1u);
}

TEST(Random, DeterministicAndInRange) {
  auto a = random_rational_vector(200, 99);
  auto b = random_rational_vector(200, 99);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, random_rational_vector(200, 100));
  for (const auto& x : a) {
    EXPECT_GE(x * 5, -45);
    EXPECT_LE(x * 5, 45);
  }
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_below(rng, 7), 7u);
  std::vector<int> items{0, 1, 2, 3, 4, 5};
  std::mt19937_64 r1(3), r2(3);
  auto x = items, y = items;
  fisher_yates(x, r1);
  fisher_yates(y, r2);
  EXPECT_EQ(x, y);
  std::sort(x.begin(), x.end());
  EXPECT_EQ(x, items);
}
