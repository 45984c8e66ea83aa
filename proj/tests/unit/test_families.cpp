#include "oracles.hpp"

#include "qekr/families.hpp"
#include "qekr/family_io.hpp"
#include "qekr/proofchain.hpp"
#include "qekr/qarith.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qekr;

namespace {

std::vector<oracle::Point> points_of(const Subspace& s) {
  std::vector<oracle::Point> gens;
  for (int r = 0; r < s.dim(); ++r) gens.push_back(oracle::pack({s.row(r).begin(), s.row(r).end()}, s.q()));
  return oracle::span(gens, s.ambient(), s.q());
}

/// d_S by point-set containment, independent of the library scan.
std::vector<std::uint64_t> brute_degrees(const Family& f, const GrassmannIndex& gd) {
  std::vector<std::vector<oracle::Point>> members;
  for (auto m : f.members()) members.push_back(points_of(f.grassmannian()[m]));
  std::vector<std::uint64_t> out;
  for (const auto& s : gd) {
    auto ps = points_of(s);
    std::uint64_t c = 0;
    for (const auto& pm : members) c += std::includes(pm.begin(), pm.end(), ps.begin(), ps.end());
    out.push_back(c);
  }
  return out;
}

Integer str_int(const json& v) { return Integer(v.get<std::string>()); }

}  // namespace

TEST(Pencil, SizesAndIntersection) {
  Workspace ws(5, 2, 2);
  Family f = canonical_pencil(ws.grassmannian(2));
  EXPECT_EQ(f.size(), 15u);
  EXPECT_TRUE(is_intersecting(f).intersecting);
  Workspace big(7, 3, 2);
  EXPECT_EQ(canonical_pencil(big.grassmannian(3)).size(), 651u);
  Workspace full(3, 3, 2);
  Family whole = canonical_pencil(full.grassmannian(3));
  EXPECT_EQ(whole.size(), 1u);
  EXPECT_THROW(canonical_pencil(ws.grassmannian(2), ws.grassmannian(2)[0]), std::invalid_argument);
}

TEST(Intersecting, DisjointPairIsWitnessed) {
  auto field = make_field(2);
  auto g = enumerate(4, 2, field);
  auto a = g.index_of(rref_canonical(*field, {{1, 0, 0, 0}, {0, 1, 0, 0}}));
  auto b = g.index_of(rref_canonical(*field, {{0, 0, 1, 0}, {0, 0, 0, 1}}));
  Family f(g, {a, b}, {{"kind", "explicit"}});
  auto check = is_intersecting(f);
  EXPECT_FALSE(check.intersecting);
  ASSERT_TRUE(check.witness.has_value());
  EXPECT_EQ(f.members()[check.witness->first], std::min(a, b));
  EXPECT_EQ(f.members()[check.witness->second], std::max(a, b));
}

TEST(Family, SortedDuplicateFreeAndValidated) {
  auto g = enumerate(4, 2, make_field(2));
  Family f(g, {9, 3, 9, 1}, {{"kind", "explicit"}});
  EXPECT_EQ(f.members(), (std::vector<std::size_t>{1, 3, 9}));
  EXPECT_TRUE(f.contains(3));
  EXPECT_FALSE(f.contains(4));
  EXPECT_THROW(Family(g, {35}, {}), std::out_of_range);
}

TEST(RandomFamily, DeterministicIntersectingAndBounded) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  auto a = random_intersecting(g, 42, 1000);
  EXPECT_TRUE(is_intersecting(a).intersecting);
  EXPECT_EQ(a, random_intersecting(g, 42, 1000));
  EXPECT_EQ(random_intersecting(g, 7, 1).size(), 1u);
  auto capped = random_intersecting(g, 7, 20);
  EXPECT_LE(capped.size(), 15u);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    auto f = random_intersecting(g, seed, 1000);
    EXPECT_TRUE(is_intersecting(f).intersecting);
    EXPECT_LE(f.size(), 15u);
    // greedy growth stops only at a maximal family
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (f.contains(c)) continue;
      bool meets_all = true;
      for (auto m : f.members()) meets_all = meets_all && meet_dim(g, c, g, m) >= 1;
      EXPECT_FALSE(meets_all);
    }
  }
  EXPECT_THROW(random_intersecting(g, 1, 0), std::invalid_argument);
}

TEST(DegreeProfile, PencilAtSevenThreeTwo) {
  Workspace ws(7, 3, 2);
  Family f = canonical_pencil(ws.grassmannian(3));
  auto p = degree_profile(f, ws.grassmannian(2));
  EXPECT_TRUE(p.report.ok());
  EXPECT_EQ(p.delta, 1u);
  EXPECT_EQ(p.report.values.at("degree_sum").get<std::string>(), "4557");
  // the minimum is attained exactly at 2-subspaces avoiding the pencil point
  auto e = rref_canonical(ws.field(), {{1, 0, 0, 0, 0, 0, 0}});
  EXPECT_FALSE(is_subspace_of(ws.field(), e, ws.grassmannian(2)[p.argmin]));
}

TEST(DegreeProfile, MatchesBruteForce) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  for (std::uint64_t seed : {1, 2, 3}) {
    Family f = random_intersecting(g, seed, 8);
    auto p = degree_profile(f, ws.grassmannian(1), 2);
    EXPECT_EQ(p.degrees, brute_degrees(f, ws.grassmannian(1)));
    EXPECT_EQ(p.delta, *std::min_element(p.degrees.begin(), p.degrees.end()));
  }
  Family pencil = canonical_pencil(g);
  auto p = degree_profile(pencil, ws.grassmannian(1));
  EXPECT_EQ(p.delta, 1u);
  EXPECT_EQ(*std::max_element(p.degrees.begin(), p.degrees.end()), 15u);
  Family empty(g, {}, {{"kind", "explicit"}});
  auto pe = degree_profile(empty, ws.grassmannian(2));
  EXPECT_EQ(pe.delta, 0u);
  EXPECT_TRUE(pe.report.ok());
}

TEST(DegreeProfile, AddingMembersNeverLowersDegrees) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  std::vector<std::size_t> members;
  auto prev = degree_profile(Family(g, members, {}), ws.grassmannian(1));
  for (std::size_t c : {4, 19, 77, 150, 3}) {
    members.push_back(c);
    auto next = degree_profile(Family(g, members, {}), ws.grassmannian(1));
    for (std::size_t s = 0; s < next.degrees.size(); ++s) EXPECT_GE(next.degrees[s], prev.degrees[s]);
    EXPECT_TRUE(next.report.ok());
    prev = next;
  }
}

TEST(Bounds, PencilsAttainEquality) {
  Workspace ws(7, 3, 2);
  Family f = canonical_pencil(ws.grassmannian(3));
  Report rep = check_bounds(f, degree_profile(f, ws.grassmannian(2)));
  EXPECT_EQ(rep.status, Status::pass);
  EXPECT_EQ(rep.values.at("delta_2").at("slack").get<std::string>(), "0");
  EXPECT_EQ(rep.values.at("size").at("slack").get<std::string>(), "0");

  Workspace small(5, 2, 2);
  Family g = canonical_pencil(small.grassmannian(2));
  Report r1 = check_bounds(g, degree_profile(g, small.grassmannian(1)));
  EXPECT_EQ(r1.status, Status::pass);
  EXPECT_EQ(r1.values.at("delta_1").at("value").get<std::string>(), "1");
  EXPECT_EQ(r1.values.at("size").at("value").get<std::string>(), "15");
}

TEST(Bounds, NonIntersectingInputIsAnError) {
  Workspace ws(4, 2, 2);
  const auto& g = ws.grassmannian(2);
  Family f(g, {0, 34}, {});
  ASSERT_FALSE(is_intersecting(f).intersecting);
  Report rep = check_bounds(f, degree_profile(f, ws.grassmannian(1)));
  EXPECT_EQ(rep.status, Status::error);
  EXPECT_TRUE(rep.witness.has_value());
}

TEST(Bounds, RangeExtrapolationAtEqualDimensions) {
  Workspace ws(4, 2, 2);
  Family f = canonical_pencil(ws.grassmannian(2));
  Report rep = check_bounds(f, degree_profile(f, ws.grassmannian(1)));
  EXPECT_EQ(rep.status, Status::range_extrapolation);
}

TEST(DisjointDegreeSum, BothSidesAgree) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  for (std::uint64_t seed : {3, 5}) {
    Family f = random_intersecting(g, seed, 1000);
    auto p = degree_profile(f, ws.grassmannian(1));
    Report rep = check_disjoint_degree_sum(f, p, ws);
    EXPECT_TRUE(rep.ok());
    // independent: ordered pairs of distinct points weighted by degrees
    Integer expected = 0;
    for (std::size_t s = 0; s < p.degrees.size(); ++s)
      for (std::size_t t = 0; t < p.degrees.size(); ++t)
        if (s != t) expected += Integer(static_cast<unsigned long>(p.degrees[s] * p.degrees[t]));
    EXPECT_EQ(str_int(rep.values.at("lhs")), expected);
  }
  Family empty(g, {}, {});
  Report rep = check_disjoint_degree_sum(empty, degree_profile(empty, ws.grassmannian(1)), ws);
  EXPECT_EQ(rep.values.at("lhs").get<std::string>(), "0");
  EXPECT_EQ(rep.values.at("rhs").get<std::string>(), "0");
}

TEST(Hoffman, IdentitiesHoldAndPencilTailVanishes) {
  Workspace ws(5, 2, 2);
  Family f = canonical_pencil(ws.grassmannian(2));
  Report rep = hoffman_check(f, 1, ws);
  EXPECT_EQ(rep.values.at("h_M_h").get<std::string>(), "0");
  EXPECT_EQ(rep.values.at("spectral_sum").get<std::string>(), "0");
  EXPECT_EQ(rep.values.at("norm_h0").get<std::string>(), "45/31");  // 15^2 / 155
  EXPECT_EQ(rep.values.at("tail_mass").get<std::string>(), "0");
  // The quantity equals minus the weighted tail, which is empty for a pencil.
  EXPECT_EQ(rep.values.at("rhs").get<std::string>(), "0");
  EXPECT_TRUE(rep.values.at("weak_nonpositive").get<bool>());
  EXPECT_TRUE(rep.residual_zero);
  EXPECT_EQ(rep.status, Status::fail);
}

TEST(Hoffman, StrictForFamiliesWithATail) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  Family single(g, {10}, {});
  Report rep = hoffman_check(single, 1, ws);
  EXPECT_TRUE(rep.ok()) << to_json(rep, false).dump();
  EXPECT_LT(Rational(rep.values.at("rhs").get<std::string>()), 0);
  EXPECT_GT(Rational(rep.values.at("tail_mass").get<std::string>()), 0);
  EXPECT_EQ(rep.values.at("norm_h0").get<std::string>(), "1/155");
}

TEST(Hoffman, OutOfRangeIsRecordedNotFailed) {
  Workspace ws(4, 2, 2);
  Family f(ws.grassmannian(2), {3}, {});
  Report rep = hoffman_check(f, 1, ws);
  EXPECT_EQ(rep.status, Status::range_extrapolation);
}

TEST(Hoffman, NonIntersectingIsAnError) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  std::size_t other = 0;
  while (meet_dim(g, 0, g, other) != 0) ++other;
  Report rep = hoffman_check(Family(g, {0, other}, {}), 1, ws);
  EXPECT_EQ(rep.status, Status::error);
}

TEST(DegreeExcess, EmptyFamilyGivesG) {
  Workspace ws(7, 3, 2);
  Family empty(ws.grassmannian(3), {}, {});
  Report rep = degree_excess_quantity(empty, degree_profile(empty, ws.grassmannian(2)), ws);
  EXPECT_EQ(rep.status, Status::hypothesis_not_met);
  auto cs = coefficients(7, 3, 2, 2);
  EXPECT_EQ(Rational(rep.values.at("Q").get<std::string>()), cs.g);
  EXPECT_GT(cs.g, 0);
}

TEST(DegreeExcess, PencilHypothesisNotMetAndDirectSumAgrees) {
  Workspace ws(7, 3, 2);
  Family f = canonical_pencil(ws.grassmannian(3));
  Report rep = degree_excess_quantity(f, degree_profile(f, ws.grassmannian(2)), ws);
  EXPECT_EQ(rep.status, Status::hypothesis_not_met);
  EXPECT_TRUE(rep.residual_zero);
  EXPECT_EQ(Rational(rep.values.at("Q").get<std::string>()), Rational(rep.values.at("direct").get<std::string>()));
}

TEST(DegreeExcess, FullGrassmannianMeetsTheHypothesis) {
  // Not intersecting, so no theorem applies, but delta_d exceeds the bound and Q > 0.
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  Family f(g, all, {});
  Report rep = degree_excess_quantity(f, degree_profile(f, ws.grassmannian(1)), ws);
  EXPECT_GT(Rational(rep.values.at("Q").get<std::string>()), 0);
  EXPECT_EQ(rep.severity, Severity::info);
}

TEST(FamilyFile, RoundTrip) {
  Workspace ws(5, 2, 2);
  const auto& g = ws.grassmannian(2);
  for (const Family& f : {canonical_pencil(g), random_intersecting(g, 11, 1000)}) {
    std::stringstream ss;
    save_family(f, ss);
    auto loaded = bind_family(read_family_document(ss), g);
    EXPECT_TRUE(loaded.warnings.empty());
    EXPECT_EQ(loaded.family, f);
  }
}

TEST(FamilyFile, ExtensionFieldRoundTrip) {
  Workspace ws(3, 2, 4);
  const auto& g = ws.grassmannian(2);
  Family f = random_intersecting(g, 2, 5);
  json j = family_to_json(f);
  EXPECT_EQ(j.at("modulus"), json({1, 1}));
  auto loaded = bind_family(parse_family_document(j), g);
  EXPECT_EQ(loaded.family, f);
}

TEST(FamilyFile, DuplicatesAndNonCanonicalBases) {
  Workspace ws(4, 2, 2);
  const auto& g = ws.grassmannian(2);
  json j = {{"format_version", 1}, {"n", 4}, {"k", 2}, {"q", 2}, {"modulus", json::array()},
            {"members", {{{1, 0, 0, 0}, {0, 1, 0, 0}}, {{1, 1, 0, 0}, {0, 1, 0, 0}}, {{0, 0, 1, 0}, {1, 0, 0, 1}}}}};
  auto loaded = bind_family(parse_family_document(j), g);
  EXPECT_EQ(loaded.family.size(), 2u);
  EXPECT_EQ(loaded.warnings.size(), 3u);  // two canonicalized, one duplicate
  EXPECT_EQ(loaded.family.provenance().at("kind"), "file");
}

TEST(FamilyFile, Errors) {
  Workspace ws(3, 2, 4);
  const auto& g = ws.grassmannian(2);
  json base = {{"format_version", 1}, {"n", 3}, {"k", 2}, {"q", 4}, {"modulus", {1, 1, 1}},
               {"members", {{{1, 0, 5}, {0, 1, 0}}}}};
  EXPECT_THROW(bind_family(parse_family_document(base), g), FamilyFormatError);
  json rank_deficient = base;
  rank_deficient["members"] = {{{1, 0, 2}, {1, 0, 2}}};
  EXPECT_THROW(bind_family(parse_family_document(rank_deficient), g), FamilyFormatError);
  json wrong_field = base;
  wrong_field["modulus"] = json::array();
  wrong_field["members"] = json::array();
  EXPECT_THROW(bind_family(parse_family_document(wrong_field), g), FamilyFormatError);
  json wrong_version = base;
  wrong_version["format_version"] = 7;
  EXPECT_THROW(parse_family_document(wrong_version), FamilyFormatError);
  json missing = base;
  missing.erase("members");
  EXPECT_THROW(parse_family_document(missing), FamilyFormatError);
  std::stringstream garbage("not json at all");
  EXPECT_THROW(read_family_document(garbage), FamilyFormatError);
}
