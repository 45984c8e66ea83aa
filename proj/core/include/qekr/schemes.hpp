#pragma once

// Inclusion and trivial-intersection incidence matrices between Grassmannians,
// the q-Kneser graph, its spectrum and its eigenprojectors.
//
// Spectral work is done with the integer matrix M = q^{k^2} A, the 0/1
// adjacency matrix of the q-Kneser graph, whose eigenvalues are the integers
// mu_i = q^{k^2} lambda_i. The projector onto U_i is the Lagrange polynomial
// P_i = N_i / D_i with N_i = prod_{j != i} (M - mu_j I), D_i = prod_{j != i} (mu_i - mu_j).

#include "qekr/grassmann.hpp"
#include "qekr/matrix.hpp"
#include "qekr/report.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

namespace qekr {

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// (W_{i,j})_{S,T} = 1 iff S <= T. Requires dim rows <= dim cols.
Incidence build_incidence(const GrassmannIndex& rows, const GrassmannIndex& cols);
/// (W̄_{i,j})_{S,T} = 1 iff S meet T = {0}.
Incidence build_disjointness(const GrassmannIndex& rows, const GrassmannIndex& cols, int jobs = 1);
/// M = q^{k^2} A, the q-Kneser adjacency matrix, equal to W̄_{k,k}.
Incidence qkneser_adjacency(const GrassmannIndex& g, int jobs = 1);

struct SpectrumEntry {
  int i = 0;
  Rational lambda;
  /// q^{k^2} lambda_i; always an integer.
  Integer mu;
  Integer multiplicity;
};

struct SpectrumTable {
  int n = 0, k = 0, q = 0;
  /// q^{k^2}
  Integer scale;
  std::vector<SpectrumEntry> entries;
  bool distinct = true;
  /// Formula-level checks: distinctness, integrality of mu, sum of
  /// multiplicities, zero trace.
  Report report;
};

/// lambda_i = (-1)^i q^{C(i,2) - k i} [n-k-i, k-i], m_i = [n, i] - [n, i-1]. Requires n >= 2k.
SpectrumTable spectrum(int n, int k, int q);

/// Coefficients (constant first) of prod_{j != i} (x - mu_j).
std::vector<Integer> lagrange_numerator(const SpectrumTable& spec, int i);
/// prod_{j != i} (mu_i - mu_j).
Integer lagrange_denominator(const SpectrumTable& spec, int i);

struct ProjectorSet {
  SpectrumTable spectrum;
  std::vector<IntMatrix> numerators;
  std::vector<Integer> denominators;
  /// Exact checks of every projector identity against M.
  Report report;

  std::size_t size() const { return numerators.size(); }
  RationalMatrix projector(int i) const { return RationalMatrix(numerators.at(i), denominators.at(i)); }
};

/// Builds the projectors from the dense adjacency matrix and verifies
/// N_i N_j = 0 (i != j), N_i^2 = D_i N_i, sum P_i = I, sum mu_i P_i = M,
/// trace P_i = m_i, symmetry, and P_0 = J/[n, k]. Throws if the spectrum has a
/// collision.
ProjectorSet eigenprojectors(const IntMatrix& m, const SpectrumTable& spec, int jobs = 1);

/// The q-Kneser adjacency as a bit matrix, for matrix-vector products at sizes
/// where dense projectors are out of reach.
class KneserOperator {
 public:
  explicit KneserOperator(const GrassmannIndex& g, int jobs = 1);

  std::size_t size() const { return size_; }
  bool adjacent(std::size_t r, std::size_t c) const {
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U;
  }
  std::size_t degree(std::size_t r) const;
  IntVector apply(std::span<const Integer> v, int jobs = 1) const;

 private:
  std::size_t size_ = 0, words_ = 0;
  std::vector<std::uint64_t> bits_;
};

/// h = h_0 + ... + h_k with h_i in U_i.
struct Projection {
  std::vector<RationalVector> parts;
  std::vector<Rational> norms;  // ||h_i||^2
  Rational total_norm;          // ||h||^2
  /// sum h_i = h, <h_i, h_j> = 0 for i != j, ||h||^2 = sum ||h_i||^2.
  Report report;
};

Projection project(std::span<const Rational> h, const ProjectorSet& p);
/// Same decomposition via h_i = N_i h / D_i with N_i h assembled from the
/// vectors h, Mh, ..., M^k h.
Projection project(std::span<const Rational> h, const KneserOperator& m, const SpectrumTable& spec,
                   int jobs = 1);

struct WorkspaceOptions {
  std::uint64_t cap = GrassmannIndex::kDefaultCap;
  /// Largest [n, k] for which dense projectors are built.
  std::size_t dense_budget = 1500;
  int jobs = 1;
  Ambient::Loader loader;
};

/// Everything about one (n, k, q) instance, built on first use and shared.
/// Thread-safe.
class Workspace {
 public:
  Workspace(int n, int k, int q, WorkspaceOptions options = {});

  int n() const { return n_; }
  int k() const { return k_; }
  int q() const { return ambient_.q(); }
  int jobs() const { return options_.jobs; }
  const WorkspaceOptions& options() const { return options_; }
  const FiniteField& field() const { return ambient_.field(); }
  const Ambient& ambient() const { return ambient_; }
  json params() const { return {{"n", n_}, {"k", k_}, {"q", q()}}; }

  const GrassmannIndex& grassmannian(int dim) const { return ambient_.grassmannian(dim); }
  IndexSpace space(int dim) const { return IndexSpace::of(grassmannian(dim)); }

  const Incidence& incidence(int i, int j) const;
  const Incidence& disjointness(int i, int j) const;
  const Incidence& adjacency() const { return disjointness(k_, k_); }

  const SpectrumTable& spectrum() const;
  /// True when [n, k] is within the dense budget.
  bool dense_feasible() const;
  /// Throws BudgetExceeded when !dense_feasible().
  const ProjectorSet& projectors() const;
  const KneserOperator& kneser() const;

  /// Dense projectors when feasible, the operator route otherwise.
  Projection project(std::span<const Rational> h) const;

  /// Memo for reports that depend only on the instance.
  const Report* memo(const std::string& key) const;
  void remember(const std::string& key, Report r) const;

 private:
  int n_, k_;
  WorkspaceOptions options_;
  Ambient ambient_;
  mutable std::recursive_mutex mutex_;
  mutable std::map<std::pair<int, int>, std::shared_ptr<const Incidence>> incidence_, disjoint_;
  mutable std::shared_ptr<const SpectrumTable> spectrum_;
  mutable std::shared_ptr<const ProjectorSet> projectors_;
  mutable std::shared_ptr<const KneserOperator> kneser_;
  mutable std::map<std::string, Report> memo_;
};

}  // namespace qekr
