#include "oracles.hpp"

#include "qekr/grassmann.hpp"
#include "qekr/grassmann_cache.hpp"
#include "qekr/qarith.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qekr;

namespace {

std::vector<oracle::Point> points_of(const Subspace& s) {
  std::vector<oracle::Point> gens;
  for (int r = 0; r < s.dim(); ++r) {
    std::vector<int> v(s.row(r).begin(), s.row(r).end());
    gens.push_back(oracle::pack(v, s.q()));
  }
  return oracle::span(gens, s.ambient(), s.q());
}

bool is_rref(const Subspace& s) {
  int last = -1;
  for (int r = 0; r < s.dim(); ++r) {
    int p = 0;
    while (p < s.ambient() && s.at(r, p) == 0) ++p;
    if (p == s.ambient() || p <= last || s.at(r, p) != 1) return false;
    for (int r2 = 0; r2 < s.dim(); ++r2)
      if (r2 != r && s.at(r2, p) != 0) return false;
    last = p;
  }
  return true;
}

}  // namespace

TEST(Enumerate, CountsMatchGaussianBinomials) {
  for (int q : {2, 3})
    for (int n = 1; n <= 6; ++n)
      for (int k = 0; k <= n; ++k) {
        auto g = enumerate(n, k, make_field(q), 50000);
        EXPECT_EQ(Integer(static_cast<unsigned long>(g.size())), oracle::gauss(n, k, q)) << n << ' ' << k << ' ' << q;
      }
  EXPECT_EQ(enumerate(7, 3, make_field(2)).size(), 11811u);
}

TEST(Enumerate, SameSetAsBruteForce) {
  for (auto [n, k, q] : {std::tuple{4, 2, 2}, std::tuple{3, 1, 3}, std::tuple{4, 2, 3}, std::tuple{5, 2, 2}}) {
    auto g = enumerate(n, k, make_field(q));
    std::set<std::vector<oracle::Point>> ours;
    for (const auto& s : g) {
      EXPECT_TRUE(is_rref(s));
      ours.insert(points_of(s));
    }
    EXPECT_EQ(ours.size(), g.size());
    EXPECT_EQ(ours, oracle::subspaces(n, k, q));
  }
}

TEST(Enumerate, OrderIsCanonicalAndLookupWorks) {
  auto g = enumerate(5, 2, make_field(3));
  for (std::size_t i = 0; i + 1 < g.size(); ++i) EXPECT_TRUE(canonical_less(g[i], g[i + 1]));
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.index_of(g[i]), i);
  auto other = enumerate(5, 3, make_field(3));
  EXPECT_FALSE(g.find(other[0]).has_value());
  EXPECT_THROW(g.index_of(other[0]), std::out_of_range);
}

TEST(Enumerate, ExtensionFieldCounts) {
  for (int q : {4, 8, 9})
    for (int n = 1; n <= 4; ++n)
      for (int k = 0; k <= n; ++k) EXPECT_EQ(Integer(static_cast<unsigned long>(enumerate(n, k, make_field(q)).size())),
                                             oracle::gauss(n, k, q));
}

TEST(Enumerate, CapIsEnforced) {
  try {
    enumerate(6, 3, make_field(3));
    FAIL() << "expected CapExceeded";
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.required(), 33880);
  }
  EXPECT_EQ(enumerate(6, 3, make_field(3), 50000).size(), 33880u);
}

TEST(Rref, CanonicalizesAnySpanningSet) {
  auto field = make_field(3);
  Subspace a = rref_canonical(*field, {{1, 2, 0, 1}, {2, 1, 1, 0}});
  Subspace b = rref_canonical(*field, {{0, 0, 1, 1}, {1, 2, 0, 1}, {2, 1, 1, 0}});
  EXPECT_EQ(a.dim(), 2);
  EXPECT_TRUE(is_rref(a));
  EXPECT_EQ(points_of(a), oracle::span({oracle::pack({1, 2, 0, 1}, 3), oracle::pack({2, 1, 1, 0}, 3)}, 4, 3));
  EXPECT_EQ(b.dim(), 2);
  EXPECT_EQ(a, b);
  EXPECT_THROW(rref_canonical(*field, {{1, 3, 0, 0}}), std::invalid_argument);
  EXPECT_EQ(rref_canonical(*field, {{0, 0, 0, 0}}).dim(), 0);
}

TEST(Lattice, MeetJoinContainmentAgreeWithPointSets) {
  for (int q : {2, 3}) {
    auto field = make_field(q);
    auto g2 = enumerate(4, 2, field);
    auto g1 = enumerate(4, 1, field);
    for (std::size_t a = 0; a < g2.size(); a += 3)
      for (std::size_t b = 0; b < g2.size(); b += 2) {
        auto pa = points_of(g2[a]), pb = points_of(g2[b]);
        std::size_t common = oracle::common(pa, pb);
        int dim = 0;
        for (std::size_t c = common; c > 1; c /= q) ++dim;
        EXPECT_EQ(meet_dim(*field, g2[a], g2[b]), dim);
        EXPECT_EQ(meet_dim(g2, a, g2, b), dim);
        Subspace j = join(*field, g2[a], g2[b]);
        EXPECT_EQ(j.dim(), 4 - dim);
      }
    for (std::size_t p = 0; p < g1.size(); ++p)
      for (std::size_t l = 0; l < g2.size(); ++l) {
        auto pp = points_of(g1[p]), pl = points_of(g2[l]);
        bool inside = std::includes(pl.begin(), pl.end(), pp.begin(), pp.end());
        EXPECT_EQ(is_subspace_of(*field, g1[p], g2[l]), inside);
        EXPECT_EQ(contained_in(g1, p, g2, l), inside);
      }
  }
}

TEST(DisjointCount, MatchesClosedFormAndBruteForce) {
  for (int q : {2, 3})
    for (int n = 1; n <= 5; ++n) {
      auto field = make_field(q);
      for (int m = 0; m <= n; ++m) {
        auto gm = enumerate(n, m, field);
        for (int l = 0; l + m <= n; ++l) {
          auto gl = enumerate(n, l, field);
          for (std::size_t zi : {std::size_t{0}, gm.size() - 1}) {
            auto result = count_disjoint(gm[zi], gl);
            EXPECT_TRUE(result.report.ok()) << n << ' ' << m << ' ' << l << ' ' << q;
            mpz_class qlm;
            mpz_ui_pow_ui(qlm.get_mpz_t(), q, l * m);
            EXPECT_EQ(result.count, qlm * oracle::gauss(n - m, l, q));
          }
        }
      }
    }
}

TEST(Ambient, CachesGrassmannians) {
  Ambient amb(5, make_field(2));
  const auto& a = amb.grassmannian(2);
  const auto& b = amb.grassmannian(2);
  EXPECT_EQ(&a, &b);
  EXPECT_EQ(a.size(), 155u);
}

TEST(GrassmannCache, RoundTripAndInvalidation) {
  auto dir = std::filesystem::temp_directory_path() / "qekr_cache_test";
  std::filesystem::remove_all(dir);
  auto field = make_field(2);
  std::vector<std::string> warnings;
  auto g = load_or_build(dir, 5, 2, field, 20000, &warnings);
  EXPECT_TRUE(warnings.empty());
  auto path = cache_path(dir, 5, 2, 2);
  ASSERT_TRUE(std::filesystem::exists(path));
  {
    std::ifstream in(path, std::ios::binary);
    auto h = read_cache_header(in);
    EXPECT_EQ(h.n, 5);
    EXPECT_EQ(h.k, 2);
    EXPECT_EQ(h.q, 2);
    EXPECT_EQ(h.count, 155u);
    EXPECT_EQ(h.version, kGrassmannCacheVersion);
  }
  auto again = load_or_build(dir, 5, 2, field, 20000, &warnings);
  EXPECT_TRUE(warnings.empty());
  ASSERT_EQ(again.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(again[i], g[i]);

  // Truncate the file: the next load rebuilds with a warning.
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 3);
  auto rebuilt = load_or_build(dir, 5, 2, field, 20000, &warnings);
  EXPECT_EQ(rebuilt.size(), 155u);
  EXPECT_EQ(warnings.size(), 1u);

  // Bump the version field: the header reader reports a stale cache.
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(8);
    char v[4] = {99, 0, 0, 0};
    f.write(v, 4);
  }
  {
    std::ifstream in(path, std::ios::binary);
    try {
      read_cache_header(in);
      FAIL() << "expected a stale cache";
    } catch (const CacheError& e) {
      EXPECT_EQ(e.kind(), CacheError::Kind::stale);
    }
  }
  warnings.clear();
  load_or_build(dir, 5, 2, field, 20000, &warnings);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(list_cache(dir).size(), 1u);
  EXPECT_EQ(clear_cache(dir), 1u);
  EXPECT_TRUE(list_cache(dir).empty());
  std::filesystem::remove_all(dir);
}
