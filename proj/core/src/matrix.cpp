#include "qekr/matrix.hpp"

#include "qekr/parallel.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace qekr {
namespace {

void require_same(const IndexSpace& a, const IndexSpace& b, const char* what) {
  if (!(a == b))
    throw IndexSpaceMismatch(std::string(what) + ": index spaces differ (" + a.describe() + " vs " +
                             b.describe() + ")");
}

Integer from_i128(__int128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  Integer hi = static_cast<unsigned long>(static_cast<std::uint64_t>(u >> 64));
  Integer lo = static_cast<unsigned long>(static_cast<std::uint64_t>(u));
  Integer r = (hi << 64) + lo;
  return neg ? Integer(-r) : r;
}

void assign(Integer& dst, std::int64_t v) { mpz_set_si(dst.get_mpz_t(), v); }
void assign(Integer& dst, __int128 v) { dst = from_i128(v); }

std::vector<std::int64_t> to_machine(std::span<const Integer> src) {
  std::vector<std::int64_t> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) out[i] = mpz_get_si(src[i].get_mpz_t());
  return out;
}

std::size_t count_bits(std::size_t v) { return static_cast<std::size_t>(std::bit_width(v)); }

template <class Acc>
void dense_kernel(const IntMatrix& a, const IntMatrix& b, IntMatrix& out, int jobs) {
  const std::size_t inner = a.cols(), cols = b.cols();
  auto av = to_machine(a.data());
  auto bv = to_machine(b.data());
  parallel_for(a.rows(), jobs, [&](std::size_t begin, std::size_t end) {
    std::vector<Acc> acc(cols);
    for (std::size_t r = begin; r < end; ++r) {
      std::fill(acc.begin(), acc.end(), Acc{0});
      const std::int64_t* arow = av.data() + r * inner;
      for (std::size_t m = 0; m < inner; ++m) {
        const Acc x = arow[m];
        if (x == 0) continue;
        const std::int64_t* brow = bv.data() + m * cols;
        for (std::size_t c = 0; c < cols; ++c) acc[c] += x * static_cast<Acc>(brow[c]);
      }
      for (std::size_t c = 0; c < cols; ++c) assign(out(r, c), acc[c]);
    }
  });
}

void big_kernel(const IntMatrix& a, const IntMatrix& b, IntMatrix& out, int jobs) {
  const std::size_t inner = a.cols(), cols = b.cols();
  parallel_for(a.rows(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      for (std::size_t m = 0; m < inner; ++m) {
        const Integer& x = a(r, m);
        if (sgn(x) == 0) continue;
        for (std::size_t c = 0; c < cols; ++c) {
          const Integer& y = b(m, c);
          if (sgn(y) != 0) mpz_addmul(out(r, c).get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
        }
      }
  });
}

std::uint64_t mod_of(const Integer& v, std::uint64_t p) {
  return mpz_fdiv_ui(v.get_mpz_t(), p);
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::size_t rank_dense_mod(std::vector<std::uint64_t>& m, std::size_t rows, std::size_t cols,
                           std::uint64_t p) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      std::swap_ranges(m.begin() + piv * cols, m.begin() + (piv + 1) * cols, m.begin() + rank * cols);
    std::uint64_t* prow = m.data() + rank * cols;
    const std::uint64_t inv = pow_mod(prow[c], p - 2, p);
    for (std::size_t j = c; j < cols; ++j) prow[j] = prow[j] * inv % p;
    for (std::size_t r = rank + 1; r < rows; ++r) {
      std::uint64_t* row = m.data() + r * cols;
      const std::uint64_t f = row[c];
      if (f == 0) continue;
      for (std::size_t j = c; j < cols; ++j)
        if (prow[j]) row[j] = (row[j] + (p - f) * prow[j]) % p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::string IndexSpace::describe() const {
  std::ostringstream os;
  if (n < 0)
    os << "plain[" << size << "]";
  else
    os << "Gr(" << n << "," << dim << ")_" << q << "[" << size << "]";
  return os.str();
}

IntMatrix::IntMatrix(IndexSpace rows, IndexSpace cols)
    : rows_(rows), cols_(cols), data_(rows.size * cols.size) {}

IntMatrix IntMatrix::identity(IndexSpace space) {
  IntMatrix m(space, space);
  for (std::size_t i = 0; i < space.size; ++i) m(i, i) = 1;
  return m;
}

IntMatrix IntMatrix::ones(IndexSpace rows, IndexSpace cols) {
  IntMatrix m(rows, cols);
  for (auto& v : m.data_) v = 1;
  return m;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = 0; c < cols(); ++c) t(c, r) = (*this)(r, c);
  return t;
}

Integer IntMatrix::trace() const {
  Integer t = 0;
  for (std::size_t i = 0; i < std::min(rows(), cols()); ++i) t += (*this)(i, i);
  return t;
}

bool IntMatrix::is_symmetric() const {
  if (!(rows_ == cols_)) return false;
  for (std::size_t r = 0; r < rows(); ++r)
    for (std::size_t c = r + 1; c < cols(); ++c)
      if ((*this)(r, c) != (*this)(c, r)) return false;
  return true;
}

bool IntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Integer& v) { return sgn(v) == 0; });
}

std::size_t IntMatrix::max_bits() const {
  std::size_t b = 0;
  for (const auto& v : data_) b = std::max(b, bit_length(v));
  return b;
}

IntMatrix& IntMatrix::operator+=(const IntMatrix& o) {
  require_same(rows_, o.rows_, "matrix sum");
  require_same(cols_, o.cols_, "matrix sum");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

IntMatrix& IntMatrix::operator-=(const IntMatrix& o) {
  require_same(rows_, o.rows_, "matrix difference");
  require_same(cols_, o.cols_, "matrix difference");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

IntMatrix& IntMatrix::operator*=(const Integer& s) {
  for (auto& v : data_) v *= s;
  return *this;
}

IntMatrix& IntMatrix::add_scaled(const Integer& s, const IntMatrix& o) {
  require_same(rows_, o.rows_, "matrix sum");
  require_same(cols_, o.cols_, "matrix sum");
  if (sgn(s) == 0) return *this;
  for (std::size_t i = 0; i < data_.size(); ++i)
    mpz_addmul(data_[i].get_mpz_t(), s.get_mpz_t(), o.data_[i].get_mpz_t());
  return *this;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, int jobs) {
  require_same(a.col_space(), b.row_space(), "matrix product");
  IntMatrix out(a.row_space(), b.col_space());
  const std::size_t ba = a.max_bits(), bb = b.max_bits();
  const std::size_t bound = ba + bb + count_bits(a.cols());
  if (ba <= 62 && bb <= 62 && bound <= 62)
    dense_kernel<std::int64_t>(a, b, out, jobs);
  else if (ba <= 62 && bb <= 62 && bound <= 126)
    dense_kernel<__int128>(a, b, out, jobs);
  else
    big_kernel(a, b, out, jobs);
  return out;
}

IntVector apply(const IntMatrix& a, std::span<const Integer> v) {
  if (v.size() != a.cols()) throw IndexSpaceMismatch("matrix-vector product: length mismatch");
  IntVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (sgn(a(r, c)) != 0 && sgn(v[c]) != 0)
        mpz_addmul(out[r].get_mpz_t(), a(r, c).get_mpz_t(), v[c].get_mpz_t());
  return out;
}

json Mismatch::to_json() const { return {{"row", row}, {"col", col}, {"lhs", lhs}, {"rhs", rhs}}; }

std::optional<Mismatch> first_mismatch(const IntMatrix& lhs, const IntMatrix& rhs) {
  require_same(lhs.row_space(), rhs.row_space(), "comparison");
  require_same(lhs.col_space(), rhs.col_space(), "comparison");
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c)
      if (lhs(r, c) != rhs(r, c)) return Mismatch{r, c, to_string(lhs(r, c)), to_string(rhs(r, c))};
  return std::nullopt;
}

RationalMatrix::RationalMatrix(IntMatrix numerator, Integer denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (sgn(den_) == 0) throw std::domain_error("rational matrix with zero denominator");
  if (sgn(den_) < 0) {
    den_ = -den_;
    num_ *= Integer(-1);
  }
}

Rational RationalMatrix::operator()(std::size_t r, std::size_t c) const {
  Rational v(num_(r, c), den_);
  v.canonicalize();
  return v;
}

Rational RationalMatrix::trace() const {
  Rational v(num_.trace(), den_);
  v.canonicalize();
  return v;
}

bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
  if (!(a.row_space() == b.row_space()) || !(a.col_space() == b.col_space())) return false;
  return !first_mismatch(a, b).has_value();
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b, int jobs) {
  return RationalMatrix(multiply(a.num_, b.num_, jobs), a.den_ * b.den_);
}

RationalVector apply(const RationalMatrix& a, std::span<const Rational> v) {
  Integer common = 1;
  for (const auto& x : v) common = lcm(common, x.get_den());
  IntVector scaled(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) scaled[i] = v[i].get_num() * (common / v[i].get_den());
  IntVector prod = qekr::apply(a.numerator(), scaled);
  RationalVector out(prod.size());
  const Integer den = common * a.denominator();
  for (std::size_t i = 0; i < prod.size(); ++i) {
    out[i] = Rational(prod[i], den);
    out[i].canonicalize();
  }
  return out;
}

RationalMatrix combine(std::span<const ScaledTerm> terms) {
  if (terms.empty()) throw std::invalid_argument("combine: no terms");
  Integer den = 1;
  for (const auto& t : terms) den = lcm(den, t.coeff.get_den());
  IntMatrix num(terms.front().matrix->row_space(), terms.front().matrix->col_space());
  for (const auto& t : terms) {
    Rational c = t.coeff;
    c.canonicalize();
    num.add_scaled(c.get_num() * (den / c.get_den()), *t.matrix);
  }
  return RationalMatrix(std::move(num), den);
}

std::optional<Mismatch> first_mismatch(const RationalMatrix& lhs, const RationalMatrix& rhs) {
  require_same(lhs.row_space(), rhs.row_space(), "comparison");
  require_same(lhs.col_space(), rhs.col_space(), "comparison");
  Integer x, y;
  for (std::size_t r = 0; r < lhs.rows(); ++r)
    for (std::size_t c = 0; c < lhs.cols(); ++c) {
      x = lhs.numerator()(r, c) * rhs.denominator();
      y = rhs.numerator()(r, c) * lhs.denominator();
      if (x != y) return Mismatch{r, c, to_string(lhs(r, c)), to_string(rhs(r, c))};
    }
  return std::nullopt;
}

Incidence::Incidence(IndexSpace rows, IndexSpace cols, std::vector<std::vector<std::uint32_t>> row_lists)
    : rows_(rows), cols_(cols) {
  if (row_lists.size() != rows.size) throw std::invalid_argument("incidence: row count mismatch");
  row_ptr_.reserve(rows.size + 1);
  for (auto& list : row_lists) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end())
      throw std::invalid_argument("incidence: repeated column in a row");
    if (!list.empty() && list.back() >= cols.size)
      throw std::invalid_argument("incidence: column index out of range");
    col_idx_.insert(col_idx_.end(), list.begin(), list.end());
    row_ptr_.push_back(col_idx_.size());
  }
}

bool Incidence::contains(std::size_t r, std::size_t c) const {
  auto row_span = row(r);
  return std::binary_search(row_span.begin(), row_span.end(), static_cast<std::uint32_t>(c));
}

std::size_t Incidence::max_row_length() const {
  std::size_t m = 0;
  for (std::size_t r = 0; r < rows(); ++r) m = std::max(m, row_ptr_[r + 1] - row_ptr_[r]);
  return m;
}

Incidence Incidence::transpose() const {
  std::vector<std::vector<std::uint32_t>> lists(cols());
  for (std::size_t r = 0; r < rows(); ++r)
    for (auto c : row(r)) lists[c].push_back(static_cast<std::uint32_t>(r));
  return Incidence(cols_, rows_, std::move(lists));
}

IntMatrix Incidence::to_dense() const {
  IntMatrix m(rows_, cols_);
  for (std::size_t r = 0; r < rows(); ++r)
    for (auto c : row(r)) m(r, c) = 1;
  return m;
}

IntMatrix multiply(const Incidence& a, const Incidence& b) {
  require_same(a.col_space(), b.row_space(), "incidence product");
  IntMatrix out(a.row_space(), b.col_space());
  std::vector<std::int64_t> acc(b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    std::fill(acc.begin(), acc.end(), 0);
    for (auto m : a.row(r))
      for (auto c : b.row(m)) ++acc[c];
    for (std::size_t c = 0; c < b.cols(); ++c)
      if (acc[c]) assign(out(r, c), acc[c]);
  }
  return out;
}

IntMatrix multiply_transposed(const Incidence& a, const Incidence& b) {
  require_same(a.row_space(), b.row_space(), "transposed incidence product");
  return multiply(a.transpose(), b);
}

IntMatrix multiply(const Incidence& a, const IntMatrix& x, int jobs) {
  require_same(a.col_space(), x.row_space(), "incidence-matrix product");
  IntMatrix out(a.row_space(), x.col_space());
  const std::size_t cols = x.cols();
  if (x.max_bits() + count_bits(a.max_row_length()) <= 62) {
    auto xv = to_machine(x.data());
    parallel_for(a.rows(), jobs, [&](std::size_t begin, std::size_t end) {
      std::vector<std::int64_t> acc(cols);
      for (std::size_t r = begin; r < end; ++r) {
        std::fill(acc.begin(), acc.end(), 0);
        for (auto m : a.row(r)) {
          const std::int64_t* xr = xv.data() + static_cast<std::size_t>(m) * cols;
          for (std::size_t c = 0; c < cols; ++c) acc[c] += xr[c];
        }
        for (std::size_t c = 0; c < cols; ++c) assign(out(r, c), acc[c]);
      }
    });
  } else {
    parallel_for(a.rows(), jobs, [&](std::size_t begin, std::size_t end) {
      for (std::size_t r = begin; r < end; ++r)
        for (auto m : a.row(r))
          for (std::size_t c = 0; c < cols; ++c) out(r, c) += x(m, c);
    });
  }
  return out;
}

IntMatrix multiply_transposed(const Incidence& a, const IntMatrix& x, int jobs) {
  require_same(a.row_space(), x.row_space(), "transposed incidence-matrix product");
  return multiply(a.transpose(), x, jobs);
}

IntVector apply(const Incidence& a, std::span<const Integer> v) {
  if (v.size() != a.cols()) throw IndexSpaceMismatch("incidence-vector product: length mismatch");
  IntVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (auto c : a.row(r)) out[r] += v[c];
  return out;
}

RationalVector apply(const Incidence& a, std::span<const Rational> v) {
  if (v.size() != a.cols()) throw IndexSpaceMismatch("incidence-vector product: length mismatch");
  RationalVector out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (auto c : a.row(r)) out[r] += v[c];
  return out;
}

RationalVector apply_transposed(const Incidence& a, std::span<const Rational> v) {
  if (v.size() != a.rows()) throw IndexSpaceMismatch("incidence-vector product: length mismatch");
  RationalVector out(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    if (sgn(v[r]) != 0)
      for (auto c : a.row(r)) out[c] += v[r];
  return out;
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  if (a.size() != b.size()) throw IndexSpaceMismatch("dot product: length mismatch");
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) s += a[i] * b[i];
  return s;
}

std::size_t rank_mod_prime(const IntMatrix& a, std::uint64_t prime) {
  std::vector<std::uint64_t> m(a.data().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = mod_of(a.data()[i], prime);
  return rank_dense_mod(m, a.rows(), a.cols(), prime);
}

std::size_t rank_mod_prime(const Incidence& a, std::uint64_t prime) {
  // Eliminate along the shorter side; rank is transpose-invariant.
  const bool flip = a.rows() > a.cols();
  const std::size_t rows = flip ? a.cols() : a.rows(), cols = flip ? a.rows() : a.cols();
  std::vector<std::uint64_t> m(rows * cols, 0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (auto c : a.row(r)) {
      if (flip)
        m[c * cols + r] = 1;
      else
        m[r * cols + c] = 1;
    }
  return rank_dense_mod(m, rows, cols, prime);
}

std::size_t rank_bareiss(const IntMatrix& a) {
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<Integer> m(a.data().begin(), a.data().end());
  auto at = [&](std::size_t r, std::size_t c) -> Integer& { return m[r * cols + c]; };
  Integer prev = 1, t;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && sgn(at(piv, c)) == 0) ++piv;
    if (piv == rows) continue;
    if (piv != rank)
      for (std::size_t j = 0; j < cols; ++j) std::swap(at(piv, j), at(rank, j));
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        t = at(rank, c) * at(r, j) - at(r, c) * at(rank, j);
        mpz_divexact(at(r, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      at(r, c) = 0;
    }
    prev = at(rank, c);
    ++rank;
  }
  return rank;
}

RankResult rank_over_rationals(const IntMatrix& a) {
  const std::size_t full = std::min(a.rows(), a.cols());
  std::size_t lower = rank_mod_prime(a);
  if (lower == full) return {lower, true};
  return {rank_bareiss(a), false};
}

RankResult rank_over_rationals(const Incidence& a) {
  const std::size_t full = std::min(a.rows(), a.cols());
  std::size_t lower = rank_mod_prime(a);
  if (lower == full) return {lower, true};
  return {rank_bareiss(a.to_dense()), false};
}

}  // namespace qekr
