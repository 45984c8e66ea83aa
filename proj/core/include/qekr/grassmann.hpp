#pragma once

// Subspaces of F_q^n in reduced row echelon form, deterministic enumeration of
// Grassmannians and the lattice queries the rest of the library needs.

#include "qekr/gfq.hpp"
#include "qekr/numeric.hpp"
#include "qekr/report.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace qekr {

/// A subspace of F_q^n represented by its unique RREF basis (dim x n, row-major).
/// Two subspaces are equal iff their bases are entry-wise equal.
class Subspace {
 public:
  Subspace() = default;

  int ambient() const { return n_; }
  int dim() const { return dim_; }
  int q() const { return q_; }
  Element at(int r, int c) const { return basis_[static_cast<std::size_t>(r) * n_ + c]; }
  std::span<const Element> basis() const { return basis_; }
  std::span<const Element> row(int r) const {
    return std::span<const Element>(basis_).subspan(static_cast<std::size_t>(r) * n_, n_);
  }
  const std::vector<int>& pivots() const { return pivots_; }

  /// Byte string of the basis; unique within one (n, q).
  std::string key() const { return std::string(basis_.begin(), basis_.end()); }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.q_ == b.q_ && a.dim_ == b.dim_ && a.basis_ == b.basis_;
  }

 private:
  friend Subspace rref_canonical(const FiniteField&, int, std::span<const Element>);
  friend class GrassmannEnumerator;

  int n_ = 0, q_ = 0, dim_ = 0;
  std::vector<Element> basis_;
  std::vector<int> pivots_;
};

/// Reduces `rows` (row-major, length a multiple of n) in place to RREF.
/// Zero rows end up at the bottom. Returns the rank; fills pivot columns if requested.
int row_reduce(const FiniteField& field, int n, std::vector<Element>& rows,
               std::vector<int>* pivots = nullptr);

/// Canonical subspace spanned by `rows`. A zero span yields the 0-dimensional subspace.
Subspace rref_canonical(const FiniteField& field, int n, std::span<const Element> rows);
Subspace rref_canonical(const FiniteField& field, const std::vector<std::vector<int>>& rows);

int meet_dim(const FiniteField& field, const Subspace& s, const Subspace& t);
/// True iff s <= t.
bool is_subspace_of(const FiniteField& field, const Subspace& s, const Subspace& t);
/// Span of s and t.
Subspace join(const FiniteField& field, const Subspace& s, const Subspace& t);

/// Enumeration order: pivot tuple lexicographically, then basis entries row-major.
bool canonical_less(const Subspace& a, const Subspace& b);

/// Every vector of a subspace as a bit in a q^n-bit set. Vector (v_0..v_{n-1})
/// maps to bit sum_c v_c q^c. Intersections and containment reduce to word ops.
class PointSet {
 public:
  PointSet() = default;
  PointSet(const FiniteField& field, const Subspace& s);

  std::size_t count_common(const PointSet& other) const;
  bool subset_of(const PointSet& other) const;
  std::size_t size() const;

 private:
  std::vector<std::uint64_t> words_;
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, Integer required)
      : std::runtime_error(what), required_(std::move(required)) {}
  const Integer& required() const { return required_; }

 private:
  Integer required_;
};

/// All k-subspaces of F_q^n in enumeration order with a canonical-form lookup.
/// Immutable after construction.
class GrassmannIndex {
 public:
  static constexpr std::uint64_t kDefaultCap = 20000;
  /// Point sets are kept when q^n does not exceed this many bits.
  static constexpr long kPointSetLimit = 4096;

  int ambient() const { return n_; }
  int dim() const { return k_; }
  int q() const { return field_->q(); }
  const FiniteField& field() const { return *field_; }
  const std::shared_ptr<const FiniteField>& field_ptr() const { return field_; }

  std::size_t size() const { return subspaces_.size(); }
  const Subspace& operator[](std::size_t i) const { return subspaces_[i]; }
  auto begin() const { return subspaces_.begin(); }
  auto end() const { return subspaces_.end(); }

  std::optional<std::size_t> find(const Subspace& s) const;
  /// Throws std::out_of_range when s is not a member.
  std::size_t index_of(const Subspace& s) const;

  bool has_point_sets() const { return !points_.empty(); }
  const PointSet& points(std::size_t i) const { return points_.at(i); }

 private:
  friend class GrassmannEnumerator;
  GrassmannIndex() = default;

  int n_ = 0, k_ = 0;
  std::shared_ptr<const FiniteField> field_;
  std::vector<Subspace> subspaces_;
  std::unordered_map<std::string, std::size_t> lookup_;
  std::vector<PointSet> points_;
};

/// Enumerates [F_q^n, k]; throws CapExceeded when [n, k]_q > cap.
GrassmannIndex enumerate(int n, int k, std::shared_ptr<const FiniteField> field,
                         std::uint64_t cap = GrassmannIndex::kDefaultCap);

/// Rebuilds an index from an explicit list, e.g. one read from a cache file.
/// Each entry must be in RREF, the list strictly increasing in enumeration order
/// and of length [n, k]_q. Throws std::invalid_argument otherwise.
GrassmannIndex index_from_list(int n, int k, std::shared_ptr<const FiniteField> field,
                               std::vector<Subspace> subspaces);

/// meet_dim / containment between members of two indices over the same ambient space.
/// Uses point sets when both indices carry them.
int meet_dim(const GrassmannIndex& a, std::size_t ia, const GrassmannIndex& b, std::size_t ib);
bool contained_in(const GrassmannIndex& a, std::size_t ia, const GrassmannIndex& b, std::size_t ib);

struct DisjointCount {
  Integer count;
  Report report;
};

/// Counts W in `grassmannian` with W meet Z = {0} by direct scan and compares the
/// count with q^{l m}[n-m, l]_q.
DisjointCount count_disjoint(const Subspace& z, const GrassmannIndex& grassmannian);

/// Lazily enumerated Grassmannians of one ambient space. Thread-safe.
class Ambient {
 public:
  using Loader = std::function<GrassmannIndex(int n, int k, std::shared_ptr<const FiniteField>,
                                              std::uint64_t cap)>;

  Ambient(int n, std::shared_ptr<const FiniteField> field,
          std::uint64_t cap = GrassmannIndex::kDefaultCap, Loader loader = {});

  int n() const { return n_; }
  int q() const { return field_->q(); }
  std::uint64_t cap() const { return cap_; }
  const FiniteField& field() const { return *field_; }
  const std::shared_ptr<const FiniteField>& field_ptr() const { return field_; }

  const GrassmannIndex& grassmannian(int dim) const;

 private:
  int n_;
  std::shared_ptr<const FiniteField> field_;
  std::uint64_t cap_;
  Loader loader_;
  mutable std::mutex mutex_;
  mutable std::vector<std::shared_ptr<const GrassmannIndex>> cache_;
};

}  // namespace qekr
