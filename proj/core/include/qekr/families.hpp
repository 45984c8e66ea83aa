#pragma once

// Families of k-subspaces: construction, the intersecting property, S-degrees,
// and certificates for the published degree and size bounds together with the
// spectral quantities used to prove them.

#include "qekr/grassmann.hpp"
#include "qekr/report.hpp"
#include "qekr/schemes.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace qekr {

/// A sorted, duplicate-free set of members of one Grassmannian, with a JSON
/// provenance record ({"kind": "canonical-pencil" | "random" | "file" | "explicit", ...}).
class Family {
 public:
  Family(const GrassmannIndex& g, std::vector<std::size_t> members, json provenance);

  const GrassmannIndex& grassmannian() const { return *g_; }
  const std::vector<std::size_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const json& provenance() const { return provenance_; }
  bool contains(std::size_t index) const;
  /// 0/1 indicator vector over the Grassmannian.
  RationalVector indicator() const;
  /// Members written out as basis matrices.
  json members_json() const;

  friend bool operator==(const Family& a, const Family& b) {
    return a.g_->ambient() == b.g_->ambient() && a.g_->dim() == b.g_->dim() && a.g_->q() == b.g_->q() &&
           a.members_ == b.members_ && a.provenance_ == b.provenance_;
  }

 private:
  const GrassmannIndex* g_;
  std::vector<std::size_t> members_;
  json provenance_;
};

json subspace_json(const Subspace& s);

/// All members of g containing the 1-dimensional subspace e.
Family canonical_pencil(const GrassmannIndex& g, const Subspace& e);
/// The pencil through the first point of [V, 1] in enumeration order.
Family canonical_pencil(const GrassmannIndex& g);

struct IntersectionCheck {
  bool intersecting = true;
  /// First violating pair (positions in the member list order) when not intersecting.
  std::optional<std::pair<std::size_t, std::size_t>> witness;
};

IntersectionCheck is_intersecting(const Family& f);

/// Visits the Grassmannian in a seeded Fisher-Yates order and keeps each subspace
/// that meets every member kept so far, until `target` members or exhaustion.
Family random_intersecting(const GrassmannIndex& g, std::uint64_t seed, std::size_t target);

struct DegreeProfile {
  int d = 0;
  /// degrees[s] = number of members containing the s-th d-subspace.
  std::vector<std::uint64_t> degrees;
  std::uint64_t delta = 0;
  std::size_t argmin = 0;
  /// sum_S d_S = [k, d] |F|.
  Report report;
};

/// Containment scan over every d-subspace, including those in no member.
DegreeProfile degree_profile(const Family& f, const GrassmannIndex& gd, int jobs = 1);

/// delta_d(F) <= [n-d-1, k-d-1] (k > d >= 1) and |F| <= [n-1, k-1], both stated for
/// n >= 2k+1. A violation in range is a counterexample to a published theorem and
/// is reported with critical severity and the whole family as witness.
Report check_bounds(const Family& f, const DegreeProfile& profile);

/// sum over disjoint pairs (S, T) of d-subspaces of d_S d_T, computed by direct
/// scan, against (W_{d,k} h)^T W̄_{d,d} (W_{d,k} h).
Report check_disjoint_degree_sum(const Family& f, const DegreeProfile& profile, const Workspace& ws);

/// For an intersecting family: h^T A h = 0, sum lambda_i ||h_i||^2 = 0,
/// ||h_0||^2 = |F|^2/[n,k], sum ||h_i||^2 = |F|, and
/// -c|F| + sum_{i<=d} (c + lambda_i) ||h_i||^2 < 0 with c the tail constant.
/// The report also carries the tail mass sum_{i>d} ||h_i||^2, since the
/// last quantity equals -sum_{i>d} (c + lambda_i) ||h_i||^2.
Report hoffman_check(const Family& f, int d, const Workspace& ws);

/// Q = sum_{i<=d} b_i ||h_i||^2 - f|F| + g, cross-checked against
/// sum over disjoint (S, T) of (d_S - B)(d_T - B), B = [n-d-1, k-d-1]. Asserts Q > 0 when
/// delta_d(F) > B and records hypothesis-not-met otherwise.
Report degree_excess_quantity(const Family& f, const DegreeProfile& profile, const Workspace& ws);

}  // namespace qekr
