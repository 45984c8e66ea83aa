#pragma once

// Exact matrices: dense big-integer matrices, rational matrices held as an
// integer numerator over one positive denominator, and sparse 0/1 incidence
// matrices. Every matrix carries the index spaces of its rows and columns;
// products and sums refuse mismatched spaces.

#include "qekr/grassmann.hpp"
#include "qekr/numeric.hpp"
#include "qekr/report.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qekr {

/// Coordinates indexed by the members of one Grassmannian in enumeration order,
/// or a plain coordinate space when n < 0.
struct IndexSpace {
  int n = -1;
  int dim = -1;
  int q = 0;
  std::size_t size = 0;

  static IndexSpace of(const GrassmannIndex& g) { return {g.ambient(), g.dim(), g.q(), g.size()}; }
  static IndexSpace plain(std::size_t size) { return {-1, -1, 0, size}; }

  friend bool operator==(const IndexSpace&, const IndexSpace&) = default;
  std::string describe() const;
};

class IndexSpaceMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

using IntVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(IndexSpace rows, IndexSpace cols);

  static IntMatrix identity(IndexSpace space);
  static IntMatrix ones(IndexSpace rows, IndexSpace cols);

  std::size_t rows() const { return rows_.size; }
  std::size_t cols() const { return cols_.size; }
  const IndexSpace& row_space() const { return rows_; }
  const IndexSpace& col_space() const { return cols_; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_.size + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_.size + c]; }
  std::span<const Integer> data() const { return data_; }
  std::span<Integer> data() { return data_; }

  IntMatrix transpose() const;
  Integer trace() const;
  bool is_symmetric() const;
  bool is_zero() const;
  std::size_t max_bits() const;

  IntMatrix& operator+=(const IntMatrix& o);
  IntMatrix& operator-=(const IntMatrix& o);
  IntMatrix& operator*=(const Integer& s);
  /// this += s * o
  IntMatrix& add_scaled(const Integer& s, const IntMatrix& o);

  friend IntMatrix operator+(IntMatrix a, const IntMatrix& b) { return a += b; }
  friend IntMatrix operator-(IntMatrix a, const IntMatrix& b) { return a -= b; }
  friend IntMatrix operator*(const Integer& s, IntMatrix a) { return a *= s; }
  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  IndexSpace rows_, cols_;
  std::vector<Integer> data_;
};

/// Dense product. Uses 64- or 128-bit accumulation when entry bounds prove it
/// cannot overflow, big integers otherwise; the result is identical either way.
IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, int jobs = 1);
IntVector apply(const IntMatrix& a, std::span<const Integer> v);

struct Mismatch {
  std::size_t row = 0, col = 0;
  std::string lhs, rhs;
  json to_json() const;
};

/// First (row, col) where the matrices differ, in row-major order.
std::optional<Mismatch> first_mismatch(const IntMatrix& lhs, const IntMatrix& rhs);

/// numerator / denominator with a positive denominator. Not normalized;
/// equality compares cross products.
class RationalMatrix {
 public:
  RationalMatrix() = default;
  explicit RationalMatrix(IntMatrix numerator, Integer denominator = 1);

  std::size_t rows() const { return num_.rows(); }
  std::size_t cols() const { return num_.cols(); }
  const IndexSpace& row_space() const { return num_.row_space(); }
  const IndexSpace& col_space() const { return num_.col_space(); }
  const IntMatrix& numerator() const { return num_; }
  const Integer& denominator() const { return den_; }
  Rational operator()(std::size_t r, std::size_t c) const;
  Rational trace() const;

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b);
  friend RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b, int jobs);

 private:
  IntMatrix num_;
  Integer den_ = 1;
};

/// The spectral apparatus works with exact rational matrices.
using ExactMatrix = RationalMatrix;

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b, int jobs = 1);
RationalVector apply(const RationalMatrix& a, std::span<const Rational> v);

struct ScaledTerm {
  Rational coeff;
  const IntMatrix* matrix;
};

/// sum_t coeff_t * matrix_t as numerator over the lcm of coefficient denominators.
RationalMatrix combine(std::span<const ScaledTerm> terms);

/// lhs == rhs for rational matrices, with the first offending entry.
std::optional<Mismatch> first_mismatch(const RationalMatrix& lhs, const RationalMatrix& rhs);

/// Sparse 0/1 matrix in compressed-row form; column lists are sorted.
class Incidence {
 public:
  Incidence() = default;
  Incidence(IndexSpace rows, IndexSpace cols, std::vector<std::vector<std::uint32_t>> row_lists);

  std::size_t rows() const { return rows_.size; }
  std::size_t cols() const { return cols_.size; }
  const IndexSpace& row_space() const { return rows_; }
  const IndexSpace& col_space() const { return cols_; }
  std::size_t nnz() const { return col_idx_.size(); }

  std::span<const std::uint32_t> row(std::size_t r) const {
    return std::span<const std::uint32_t>(col_idx_).subspan(row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]);
  }
  bool contains(std::size_t r, std::size_t c) const;
  std::size_t max_row_length() const;

  Incidence transpose() const;
  IntMatrix to_dense() const;

 private:
  IndexSpace rows_, cols_;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::uint32_t> col_idx_;
};

/// a * b with entries counting common middle indices.
IntMatrix multiply(const Incidence& a, const Incidence& b);
/// a^T * b for two incidences sharing their row space.
IntMatrix multiply_transposed(const Incidence& a, const Incidence& b);
IntMatrix multiply(const Incidence& a, const IntMatrix& x, int jobs = 1);
IntMatrix multiply_transposed(const Incidence& a, const IntMatrix& x, int jobs = 1);

IntVector apply(const Incidence& a, std::span<const Integer> v);
RationalVector apply(const Incidence& a, std::span<const Rational> v);
RationalVector apply_transposed(const Incidence& a, std::span<const Rational> v);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

/// Rank modulo a prime. A lower bound for the rank over Q.
std::size_t rank_mod_prime(const IntMatrix& a, std::uint64_t prime = 2147483647ULL);
std::size_t rank_mod_prime(const Incidence& a, std::uint64_t prime = 2147483647ULL);
/// Fraction-free (Bareiss) elimination; exact rank over Q.
std::size_t rank_bareiss(const IntMatrix& a);

struct RankResult {
  std::size_t rank = 0;
  /// True when the modular lower bound already reached min(rows, cols).
  bool full_by_modular = false;
};

/// Exact rank over Q: the modular bound when it is full, Bareiss otherwise.
RankResult rank_over_rationals(const IntMatrix& a);
RankResult rank_over_rationals(const Incidence& a);

}  // namespace qekr
