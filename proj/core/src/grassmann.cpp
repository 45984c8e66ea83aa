#include "qekr/grassmann.hpp"

#include "qekr/qarith.hpp"

#include <algorithm>
#include <bit>

namespace qekr {

int row_reduce(const FiniteField& field, int n, std::vector<Element>& rows, std::vector<int>* pivots) {
  const int m = n == 0 ? 0 : static_cast<int>(rows.size()) / n;
  auto at = [&](int r, int c) -> Element& { return rows[static_cast<std::size_t>(r) * n + c]; };
  int rank = 0;
  if (pivots) pivots->clear();
  for (int c = 0; c < n && rank < m; ++c) {
    int sel = -1;
    for (int r = rank; r < m; ++r)
      if (at(r, c) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != rank)
      for (int j = 0; j < n; ++j) std::swap(at(sel, j), at(rank, j));
    Element inv = field.inv(at(rank, c));
    for (int j = c; j < n; ++j) at(rank, j) = field.mul(at(rank, j), inv);
    for (int r = 0; r < m; ++r) {
      if (r == rank || at(r, c) == 0) continue;
      Element factor = at(r, c);
      for (int j = c; j < n; ++j) at(r, j) = field.sub(at(r, j), field.mul(factor, at(rank, j)));
    }
    if (pivots) pivots->push_back(c);
    ++rank;
  }
  return rank;
}

Subspace rref_canonical(const FiniteField& field, int n, std::span<const Element> rows) {
  if (n <= 0 || rows.size() % static_cast<std::size_t>(n) != 0)
    throw std::invalid_argument("rref_canonical: row data is not a multiple of n");
  for (Element e : rows)
    if (!field.valid(e)) throw std::invalid_argument("rref_canonical: invalid field element");
  std::vector<Element> m(rows.begin(), rows.end());
  Subspace s;
  s.n_ = n;
  s.q_ = field.q();
  s.dim_ = row_reduce(field, n, m, &s.pivots_);
  m.resize(static_cast<std::size_t>(s.dim_) * n);
  s.basis_ = std::move(m);
  return s;
}

Subspace rref_canonical(const FiniteField& field, const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw std::invalid_argument("rref_canonical: no rows");
  const std::size_t n = rows.front().size();
  std::vector<Element> flat;
  for (const auto& r : rows) {
    if (r.size() != n) throw std::invalid_argument("rref_canonical: ragged rows");
    for (int v : r) {
      if (!field.valid(v)) throw std::invalid_argument("rref_canonical: invalid field element");
      flat.push_back(static_cast<Element>(v));
    }
  }
  return rref_canonical(field, static_cast<int>(n), flat);
}

namespace {

void require_same_ambient(const FiniteField& field, const Subspace& s, const Subspace& t) {
  if (s.ambient() != t.ambient() || s.q() != t.q() || s.q() != field.q())
    throw std::invalid_argument("subspaces live in different ambient spaces");
}

int stacked_rank(const FiniteField& field, const Subspace& s, const Subspace& t) {
  std::vector<Element> m(s.basis().begin(), s.basis().end());
  m.insert(m.end(), t.basis().begin(), t.basis().end());
  return row_reduce(field, s.ambient(), m);
}

}  // namespace

int meet_dim(const FiniteField& field, const Subspace& s, const Subspace& t) {
  require_same_ambient(field, s, t);
  return s.dim() + t.dim() - stacked_rank(field, s, t);
}

bool is_subspace_of(const FiniteField& field, const Subspace& s, const Subspace& t) {
  require_same_ambient(field, s, t);
  return s.dim() <= t.dim() && stacked_rank(field, s, t) == t.dim();
}

Subspace join(const FiniteField& field, const Subspace& s, const Subspace& t) {
  require_same_ambient(field, s, t);
  std::vector<Element> m(s.basis().begin(), s.basis().end());
  m.insert(m.end(), t.basis().begin(), t.basis().end());
  if (m.empty()) return rref_canonical(field, s.ambient(), std::vector<Element>(s.ambient(), 0));
  return rref_canonical(field, s.ambient(), m);
}

bool canonical_less(const Subspace& a, const Subspace& b) {
  if (a.pivots() != b.pivots())
    return std::lexicographical_compare(a.pivots().begin(), a.pivots().end(), b.pivots().begin(),
                                        b.pivots().end());
  return std::lexicographical_compare(a.basis().begin(), a.basis().end(), b.basis().begin(),
                                      b.basis().end());
}

PointSet::PointSet(const FiniteField& field, const Subspace& s) {
  const int n = s.ambient(), q = field.q();
  std::size_t bits = 1;
  for (int i = 0; i < n; ++i) bits *= static_cast<std::size_t>(q);
  words_.assign((bits + 63) / 64, 0);
  std::vector<std::size_t> place(n);
  for (int c = 0, p = 1; c < n; ++c, p *= q) place[c] = static_cast<std::size_t>(p);
  // walk all coefficient vectors in base q
  std::vector<Element> coeff(s.dim(), 0);
  std::vector<Element> vec(n);
  while (true) {
    std::fill(vec.begin(), vec.end(), 0);
    for (int r = 0; r < s.dim(); ++r) {
      if (coeff[r] == 0) continue;
      for (int c = 0; c < n; ++c) vec[c] = field.add(vec[c], field.mul(coeff[r], s.at(r, c)));
    }
    std::size_t code = 0;
    for (int c = 0; c < n; ++c) code += vec[c] * place[c];
    words_[code / 64] |= std::uint64_t{1} << (code % 64);
    int r = 0;
    for (; r < s.dim(); ++r) {
      if (++coeff[r] < q) break;
      coeff[r] = 0;
    }
    if (r == s.dim()) break;
  }
}

std::size_t PointSet::count_common(const PointSet& other) const {
  std::size_t total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) total += std::popcount(words_[i] & other.words_[i]);
  return total;
}

bool PointSet::subset_of(const PointSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i)
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  return true;
}

std::size_t PointSet::size() const {
  std::size_t total = 0;
  for (auto w : words_) total += std::popcount(w);
  return total;
}

namespace {
// Odometer step with the last digit least significant; false after wrap-around.
bool advance(std::vector<Element>& digits, int q) {
  for (std::size_t t = digits.size(); t-- > 0;) {
    if (++digits[t] < q) return true;
    digits[t] = 0;
  }
  return false;
}
}  // namespace

class GrassmannEnumerator {
 public:
  static GrassmannIndex run(int n, int k, std::shared_ptr<const FiniteField> field) {
    GrassmannIndex g;
    g.n_ = n;
    g.k_ = k;
    g.field_ = std::move(field);
    const FiniteField& f = *g.field_;
    const int q = f.q();

    std::vector<int> piv(k);
    for (int i = 0; i < k; ++i) piv[i] = i;
    while (true) {
      std::vector<bool> is_pivot(n, false);
      for (int p : piv) is_pivot[p] = true;
      std::vector<std::pair<int, int>> free_pos;  // row-major
      for (int r = 0; r < k; ++r)
        for (int c = piv[r] + 1; c < n; ++c)
          if (!is_pivot[c]) free_pos.emplace_back(r, c);
      std::vector<Element> digits(free_pos.size(), 0);
      do {
        Subspace s;
        s.n_ = n;
        s.q_ = q;
        s.dim_ = k;
        s.pivots_ = piv;
        s.basis_.assign(static_cast<std::size_t>(k) * n, 0);
        for (int r = 0; r < k; ++r) s.basis_[static_cast<std::size_t>(r) * n + piv[r]] = 1;
        for (std::size_t t = 0; t < free_pos.size(); ++t)
          s.basis_[static_cast<std::size_t>(free_pos[t].first) * n + free_pos[t].second] = digits[t];
        g.subspaces_.push_back(std::move(s));
      } while (advance(digits, q));
      // next combination in lexicographic order
      int i = k - 1;
      while (i >= 0 && piv[i] == n - k + i) --i;
      if (i < 0) break;
      ++piv[i];
      for (int j = i + 1; j < k; ++j) piv[j] = piv[j - 1] + 1;
    }
    finish(g);
    return g;
  }

  static GrassmannIndex from_list(int n, int k, std::shared_ptr<const FiniteField> field,
                                  std::vector<Subspace> subspaces) {
    GrassmannIndex g;
    g.n_ = n;
    g.k_ = k;
    g.field_ = std::move(field);
    g.subspaces_ = std::move(subspaces);
    finish(g);
    return g;
  }

 private:
  static void finish(GrassmannIndex& g) {
    g.lookup_.reserve(g.subspaces_.size());
    for (std::size_t i = 0; i < g.subspaces_.size(); ++i) g.lookup_.emplace(g.subspaces_[i].key(), i);
    long bits = 1;
    for (int i = 0; i < g.n_ && bits <= GrassmannIndex::kPointSetLimit; ++i) bits *= g.field_->q();
    if (bits <= GrassmannIndex::kPointSetLimit) {
      g.points_.reserve(g.subspaces_.size());
      for (const auto& s : g.subspaces_) g.points_.emplace_back(*g.field_, s);
    }
  }
};

std::optional<std::size_t> GrassmannIndex::find(const Subspace& s) const {
  if (s.ambient() != n_ || s.dim() != k_ || s.q() != q()) return std::nullopt;
  auto it = lookup_.find(s.key());
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t GrassmannIndex::index_of(const Subspace& s) const {
  auto idx = find(s);
  if (!idx) throw std::out_of_range("subspace is not a member of this Grassmannian");
  return *idx;
}

namespace {
void check_enumeration_params(int n, int k, const std::shared_ptr<const FiniteField>& field) {
  if (!field) throw std::invalid_argument("enumerate: null field");
  if (n < 1 || k < 0 || k > n)
    throw std::invalid_argument("enumerate: requires 0 <= k <= n and n >= 1");
}
}  // namespace

GrassmannIndex enumerate(int n, int k, std::shared_ptr<const FiniteField> field, std::uint64_t cap) {
  check_enumeration_params(n, k, field);
  Integer count = gauss_binom(n, k, field->q());
  if (count > Integer(std::to_string(cap)))
    throw CapExceeded("Grassmannian [" + std::to_string(n) + "," + std::to_string(k) + "]_" +
                          std::to_string(field->q()) + " has " + count.get_str() +
                          " members; cap is " + std::to_string(cap) + " (raise it to at least " +
                          count.get_str() + ")",
                      count);
  GrassmannIndex g = GrassmannEnumerator::run(n, k, std::move(field));
  if (Integer(std::to_string(g.size())) != count)
    throw std::logic_error("enumerate: count differs from the Gaussian binomial");
  return g;
}

GrassmannIndex index_from_list(int n, int k, std::shared_ptr<const FiniteField> field,
                               std::vector<Subspace> subspaces) {
  check_enumeration_params(n, k, field);
  if (Integer(std::to_string(subspaces.size())) != gauss_binom(n, k, field->q()))
    throw std::invalid_argument("subspace list has the wrong length");
  for (std::size_t i = 0; i < subspaces.size(); ++i) {
    const Subspace& s = subspaces[i];
    if (s.ambient() != n || s.dim() != k || s.q() != field->q())
      throw std::invalid_argument("subspace list entry has wrong shape");
    if (k > 0 && !(rref_canonical(*field, n, s.basis()) == s))
      throw std::invalid_argument("subspace list entry is not in RREF");
    if (i > 0 && !canonical_less(subspaces[i - 1], s))
      throw std::invalid_argument("subspace list is not strictly increasing");
  }
  return GrassmannEnumerator::from_list(n, k, std::move(field), std::move(subspaces));
}

namespace {
int log_q(std::size_t count, int q) {
  int t = 0;
  while (count > 1) {
    count /= static_cast<std::size_t>(q);
    ++t;
  }
  return t;
}
}  // namespace

int meet_dim(const GrassmannIndex& a, std::size_t ia, const GrassmannIndex& b, std::size_t ib) {
  if (a.has_point_sets() && b.has_point_sets())
    return log_q(a.points(ia).count_common(b.points(ib)), a.q());
  return meet_dim(a.field(), a[ia], b[ib]);
}

bool contained_in(const GrassmannIndex& a, std::size_t ia, const GrassmannIndex& b, std::size_t ib) {
  if (a.dim() > b.dim()) return false;
  if (a.has_point_sets() && b.has_point_sets()) return a.points(ia).subset_of(b.points(ib));
  return is_subspace_of(a.field(), a[ia], b[ib]);
}

DisjointCount count_disjoint(const Subspace& z, const GrassmannIndex& g) {
  const int n = g.ambient(), m = z.dim(), l = g.dim(), q = g.q();
  DisjointCount out;
  out.report = Report("disjoint_subspace_count", json{{"n", n}, {"q", q}, {"m", m}, {"l", l}});
  ReportTimer timer(out.report);
  if (z.ambient() != n || z.q() != q) throw std::invalid_argument("count_disjoint: ambient mismatch");
  if (m + l > n) throw std::invalid_argument("count_disjoint: requires m + l <= n");

  std::optional<PointSet> zp;
  if (g.has_point_sets()) zp.emplace(g.field(), z);
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    bool disjoint = zp ? zp->count_common(g.points(i)) == 1 : meet_dim(g.field(), z, g[i]) == 0;
    if (disjoint) ++count;
  }
  out.count = Integer(std::to_string(count));
  Integer closed = ipow(q, static_cast<unsigned long>(l * m)) * gauss_binom(n - m, l, q);
  out.report.values["scan"] = to_string(out.count);
  out.report.values["closed_form"] = to_string(closed);
  if (out.count != closed) out.report.fail_residual("scan count differs from q^{lm}[n-m, l]");
  return out;
}

Ambient::Ambient(int n, std::shared_ptr<const FiniteField> field, std::uint64_t cap, Loader loader)
    : n_(n), field_(std::move(field)), cap_(cap), loader_(std::move(loader)), cache_(n + 1) {
  if (n < 1) throw std::invalid_argument("Ambient: n must be >= 1");
  if (!field_) throw std::invalid_argument("Ambient: null field");
}

const GrassmannIndex& Ambient::grassmannian(int dim) const {
  if (dim < 0 || dim > n_) throw std::out_of_range("Ambient: dimension out of range");
  std::lock_guard<std::mutex> lock(mutex_);
  auto& slot = cache_[dim];
  if (!slot) {
    if (loader_)
      slot = std::make_shared<const GrassmannIndex>(loader_(n_, dim, field_, cap_));
    else
      slot = std::make_shared<const GrassmannIndex>(enumerate(n_, dim, field_, cap_));
  }
  return *slot;
}

}  // namespace qekr
