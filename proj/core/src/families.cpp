#include "qekr/families.hpp"

#include "qekr/parallel.hpp"
#include "qekr/proofchain.hpp"
#include "qekr/qarith.hpp"
#include "qekr/random.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

namespace qekr {
namespace {

json family_params(const Family& f, int d) {
  const auto& g = f.grassmannian();
  return {{"n", g.ambient()}, {"k", g.dim()}, {"q", g.q()}, {"d", d}, {"size", f.size()}};
}

json family_witness(const Family& f) {
  return {{"provenance", f.provenance()}, {"members", f.members_json()}};
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

/// Per d-subspace S: the number of d-subspaces T with S meet T = 0 and the sum
/// of their degrees. Direct point-set scan, independent of the incidence matrices.
struct DisjointSums {
  std::vector<std::uint64_t> count;
  std::vector<Integer> degree_sum;
};

DisjointSums disjoint_sums(const GrassmannIndex& gd, const DegreeProfile& profile, int jobs) {
  std::size_t m = gd.size();
  DisjointSums out{std::vector<std::uint64_t>(m, 0), std::vector<Integer>(m, 0)};
  parallel_for(m, jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      std::uint64_t count = 0, sum = 0;
      for (std::size_t t = 0; t < m; ++t) {
        if (meet_dim(gd, s, gd, t) != 0) continue;
        ++count;
        sum += profile.degrees[t];
      }
      out.count[s] = count;
      out.degree_sum[s] = Integer(static_cast<unsigned long>(sum));
    }
  });
  return out;
}

Integer big(std::uint64_t v) { return Integer(static_cast<unsigned long>(v)); }

IntVector indicator_int(const Family& f) {
  IntVector h(f.grassmannian().size(), 0);
  for (auto m : f.members()) h[m] = 1;
  return h;
}

}  // namespace

Family::Family(const GrassmannIndex& g, std::vector<std::size_t> members, json provenance)
    : g_(&g), members_(std::move(members)), provenance_(std::move(provenance)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty() && members_.back() >= g.size())
    throw std::out_of_range("family member index " + std::to_string(members_.back()) +
                            " outside the Grassmannian of size " + std::to_string(g.size()));
}

bool Family::contains(std::size_t index) const {
  return std::binary_search(members_.begin(), members_.end(), index);
}

RationalVector Family::indicator() const {
  RationalVector h(g_->size(), 0);
  for (auto m : members_) h[m] = 1;
  return h;
}

json Family::members_json() const {
  json out = json::array();
  for (auto m : members_) out.push_back(subspace_json((*g_)[m]));
  return out;
}

json subspace_json(const Subspace& s) {
  json rows = json::array();
  for (int r = 0; r < s.dim(); ++r) {
    json row = json::array();
    for (Element e : s.row(r)) row.push_back(static_cast<int>(e));
    rows.push_back(std::move(row));
  }
  return rows;
}

Family canonical_pencil(const GrassmannIndex& g, const Subspace& e) {
  if (e.dim() != 1) throw std::invalid_argument("pencil point must be 1-dimensional, got dimension " +
                                                std::to_string(e.dim()));
  if (e.ambient() != g.ambient() || e.q() != g.q())
    throw std::invalid_argument("pencil point lives in a different space");
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < g.size(); ++i)
    if (is_subspace_of(g.field(), e, g[i])) members.push_back(i);
  return Family(g, std::move(members), {{"kind", "canonical-pencil"}, {"point", subspace_json(e)}});
}

Family canonical_pencil(const GrassmannIndex& g) {
  std::vector<Element> row(static_cast<std::size_t>(g.ambient()), 0);
  row[0] = 1;
  return canonical_pencil(g, rref_canonical(g.field(), g.ambient(), row));
}

IntersectionCheck is_intersecting(const Family& f) {
  const auto& g = f.grassmannian();
  const auto& m = f.members();
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      if (meet_dim(g, m[a], g, m[b]) == 0) return {false, std::make_pair(a, b)};
  return {};
}

Family random_intersecting(const GrassmannIndex& g, std::uint64_t seed, std::size_t target) {
  require(target >= 1, "random family target must be at least 1");
  std::vector<std::size_t> order(g.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  fisher_yates(order, rng);
  std::vector<std::size_t> kept;
  for (auto candidate : order) {
    if (kept.size() >= target) break;
    bool meets_all = std::all_of(kept.begin(), kept.end(),
                                 [&](std::size_t m) { return meet_dim(g, candidate, g, m) >= 1; });
    if (meets_all) kept.push_back(candidate);
  }
  return Family(g, std::move(kept),
                {{"kind", "random"}, {"seed", seed}, {"target", target}});
}

DegreeProfile degree_profile(const Family& f, const GrassmannIndex& gd, int jobs) {
  const auto& g = f.grassmannian();
  int d = gd.dim();
  require(1 <= d && d <= g.dim(), "degree profile requires 1 <= d <= k");
  require(gd.ambient() == g.ambient() && gd.q() == g.q(), "d-Grassmannian lives in a different space");

  DegreeProfile p;
  p.d = d;
  p.degrees.assign(gd.size(), 0);
  parallel_for(gd.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      std::uint64_t count = 0;
      for (auto m : f.members())
        if (contained_in(gd, s, g, m)) ++count;
      p.degrees[s] = count;
    }
  });
  auto it = std::min_element(p.degrees.begin(), p.degrees.end());
  p.argmin = static_cast<std::size_t>(it - p.degrees.begin());
  p.delta = *it;

  p.report = Report("degree_count", family_params(f, d));
  Integer total = 0;
  for (auto v : p.degrees) total += big(v);
  Integer expected = gauss_binom(g.dim(), d, g.q()) * big(f.size());
  p.report.values["degree_sum"] = to_string(total);
  p.report.values["expected"] = to_string(expected);
  p.report.values["delta"] = p.delta;
  p.report.values["argmin"] = subspace_json(gd[p.argmin]);
  if (total != expected)
    p.report.fail_residual("sum of d-degrees differs from [k, d] |F|",
                           {{"lhs", to_string(total)}, {"rhs", to_string(expected)}});
  return p;
}

Report check_bounds(const Family& f, const DegreeProfile& profile) {
  const auto& g = f.grassmannian();
  long n = g.ambient(), k = g.dim(), q = g.q(), d = profile.d;
  Report rep("degree_bounds", family_params(f, static_cast<int>(d)));
  ReportTimer timer(rep);

  auto inter = is_intersecting(f);
  if (!inter.intersecting) {
    rep.status = Status::error;
    rep.severity = Severity::failure;
    const auto& m = f.members();
    rep.witness = json{{"pair", {subspace_json(g[m[inter.witness->first]]),
                                 subspace_json(g[m[inter.witness->second]])}}};
    rep.note("family is not intersecting");
    return rep;
  }

  bool in_range = n >= 2 * k + 1;
  rep.values["in_range"] = in_range;
  if (!in_range) {
    rep.status = Status::range_extrapolation;
    rep.note("outside the stated range n >= 2k+1; slack recorded only");
  }
  auto bound = [&](const std::string& name, const Integer& value, const Integer& limit) {
    rep.values[name] = {{"value", to_string(value)},
                        {"bound", to_string(limit)},
                        {"slack", to_string(Integer(limit - value))}};
    if (value <= limit) return;
    if (in_range)
      rep.fail(name + " exceeds its bound: counterexample to a published theorem", family_witness(f),
               Severity::critical);
    else
      rep.note(name + " exceeds its bound outside the stated range");
  };

  if (k > d) {
    bound(d == 1 ? "delta_1" : "delta_" + std::to_string(d), big(profile.delta),
          gauss_binom(n - d - 1, k - d - 1, q));
  } else {
    rep.note("no degree bound for d = k");
  }
  bound("size", big(f.size()), gauss_binom(n - 1, k - 1, q));
  return rep;
}

Report check_disjoint_degree_sum(const Family& f, const DegreeProfile& profile, const Workspace& ws) {
  const auto& g = f.grassmannian();
  int d = profile.d;
  require(g.ambient() == ws.n() && g.dim() == ws.k() && g.q() == ws.q(), "family and workspace disagree");
  Report rep("disjoint_degree_sum", family_params(f, d));
  ReportTimer timer(rep);

  const auto& gd = ws.grassmannian(d);
  auto sums = disjoint_sums(gd, profile, ws.jobs());
  Integer lhs = 0;
  for (std::size_t s = 0; s < gd.size(); ++s) lhs += big(profile.degrees[s]) * sums.degree_sum[s];

  IntVector h = indicator_int(f);
  IntVector wh = qekr::apply(ws.incidence(d, ws.k()), h);
  IntVector wwh = qekr::apply(ws.disjointness(d, d), wh);
  Integer rhs = 0;
  for (std::size_t s = 0; s < wh.size(); ++s) rhs += wh[s] * wwh[s];

  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  if (lhs != rhs)
    rep.fail_residual("direct disjoint-pair sum differs from the incidence quadratic form",
                      {{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}});
  return rep;
}

Report hoffman_check(const Family& f, int d, const Workspace& ws) {
  const auto& g = f.grassmannian();
  long n = ws.n(), k = ws.k(), q = ws.q();
  require(g.ambient() == n && g.dim() == k && g.q() == q, "family and workspace disagree");
  require(k > d && d >= 1, "spectral family check requires k > d >= 1");
  require(n >= 2 * k, "spectral family check requires n >= 2k");
  Report rep("hoffman_inequality", family_params(f, d));
  ReportTimer timer(rep);

  auto inter = is_intersecting(f);
  if (!inter.intersecting) {
    rep.status = Status::error;
    const auto& m = f.members();
    rep.witness = json{{"pair", {subspace_json(g[m[inter.witness->first]]),
                                 subspace_json(g[m[inter.witness->second]])}}};
    rep.note("family is not intersecting");
    return rep;
  }

  RationalVector h = f.indicator();
  Projection proj = ws.project(h);
  merge_part(rep, "projection", proj.report);
  const auto& spec = ws.spectrum();
  Rational size(static_cast<unsigned long>(f.size()));

  // h^T M h counted directly from the adjacency relation.
  IntVector mh = ws.kneser().apply(indicator_int(f), ws.jobs());
  Integer hmh = 0;
  for (auto m : f.members()) hmh += mh[m];
  rep.values["h_M_h"] = to_string(hmh);
  if (hmh != 0) rep.fail_residual("h^T A h is not zero", {{"h_M_h", to_string(hmh)}});

  Rational weighted = 0, total = 0;
  for (std::size_t i = 0; i < proj.norms.size(); ++i) {
    weighted += spec.entries[i].lambda * proj.norms[i];
    total += proj.norms[i];
  }
  rep.values["spectral_sum"] = to_string(weighted);
  if (weighted != 0) rep.fail_residual("sum lambda_i ||h_i||^2 is not zero", {{"value", to_string(weighted)}});

  Rational h0_expected = size * size / Rational(gauss_binom(n, k, q));
  rep.values["norm_h0"] = to_string(proj.norms[0]);
  if (proj.norms[0] != h0_expected)
    rep.fail_residual("||h_0||^2 differs from |F|^2/[n, k]",
                      {{"lhs", to_string(proj.norms[0])}, {"rhs", to_string(h0_expected)}});
  rep.values["norm_sum"] = to_string(total);
  if (total != size)
    rep.fail_residual("sum ||h_i||^2 differs from |F|", {{"lhs", to_string(total)}, {"rhs", to_string(size)}});

  Rational c = tail_constant(n, k, d, q);
  Rational value = -c * size, tail_value = 0, tail_mass = 0;
  for (long i = 0; i <= k; ++i) {
    Rational term = (c + spec.entries[i].lambda) * proj.norms[i];
    if (i <= d)
      value += term;
    else {
      tail_value -= term;
      tail_mass += proj.norms[i];
    }
  }
  rep.values["c"] = to_string(c);
  rep.values["rhs"] = to_string(value);
  rep.values["tail_form"] = to_string(tail_value);
  rep.values["tail_mass"] = to_string(tail_mass);
  rep.values["weak_nonpositive"] = value <= 0;
  if (value != tail_value)
    rep.fail_residual("quantity differs from its tail form",
                      {{"lhs", to_string(value)}, {"rhs", to_string(tail_value)}});

  bool in_range = n >= 2 * k + 1;
  rep.values["in_range"] = in_range;
  if (!in_range) {
    if (rep.ok()) rep.status = Status::range_extrapolation;
    rep.note("outside the stated range n >= 2k+1; sign recorded only");
    return rep;
  }
  if (value > 0) {
    rep.fail("quantity is positive", family_witness(f));
  } else if (value == 0) {
    rep.fail("quantity is zero, not strictly negative: the indicator has no component beyond U_" +
             std::to_string(d));
  }
  return rep;
}

Report degree_excess_quantity(const Family& f, const DegreeProfile& profile, const Workspace& ws) {
  const auto& g = f.grassmannian();
  long n = ws.n(), k = ws.k(), q = ws.q(), d = profile.d;
  require(g.ambient() == n && g.dim() == k && g.q() == q, "family and workspace disagree");
  require(k > d && d >= 1 && n >= 2 * k, "degree excess quantity requires k > d >= 1, n >= 2k");
  Report rep("degree_excess_quantity", family_params(f, static_cast<int>(d)));
  ReportTimer timer(rep);

  CoefficientSet cs = coefficients(n, k, d, q);
  Projection proj = ws.project(f.indicator());
  merge_part(rep, "projection", proj.report);
  Rational size(static_cast<unsigned long>(f.size()));
  Rational value = -cs.f * size + cs.g;
  for (long i = 0; i <= d; ++i) value += cs.b[i] * proj.norms[i];

  // The same quantity as sum over disjoint pairs (S, T) of (d_S - B)(d_T - B).
  Integer bound = gauss_binom(n - d - 1, k - d - 1, q);
  const auto& gd = ws.grassmannian(static_cast<int>(d));
  auto sums = disjoint_sums(gd, profile, ws.jobs());
  Integer direct = 0;
  for (std::size_t s = 0; s < gd.size(); ++s)
    direct += (big(profile.degrees[s]) - bound) * (sums.degree_sum[s] - bound * big(sums.count[s]));

  rep.values["Q"] = to_string(value);
  rep.values["direct"] = to_string(direct);
  rep.values["delta"] = profile.delta;
  rep.values["bound"] = to_string(bound);
  if (value != Rational(direct))
    rep.fail_residual("Q differs from the direct sum over disjoint pairs",
                      {{"lhs", to_string(value)}, {"rhs", to_string(direct)}});

  bool in_range = d >= 2 && n >= 2 * k + 1;
  rep.values["in_range"] = in_range;
  if (big(profile.delta) > bound) {
    if (value <= 0) rep.fail("Q is not positive although delta_d exceeds the bound", family_witness(f));
    if (in_range && is_intersecting(f).intersecting)
      rep.fail("delta_d exceeds the bound: counterexample to a published theorem", family_witness(f),
               Severity::critical);
  } else if (rep.ok()) {
    rep.status = Status::hypothesis_not_met;
    rep.note("delta_d does not exceed the bound; Q recorded only");
  }
  if (!in_range) {
    if (rep.ok()) rep.status = Status::range_extrapolation;
    rep.note("outside the range k > d >= 2, n >= 2k+1");
  }
  return rep;
}

}  // namespace qekr
