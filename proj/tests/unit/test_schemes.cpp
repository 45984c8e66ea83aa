#include "oracles.hpp"

#include "qekr/families.hpp"
#include "qekr/qarith.hpp"
#include "qekr/random.hpp"
#include "qekr/schemes.hpp"

#include <gtest/gtest.h>

using namespace qekr;

namespace {

std::vector<oracle::Point> points_of(const Subspace& s) {
  std::vector<oracle::Point> gens;
  for (int r = 0; r < s.dim(); ++r) gens.push_back(oracle::pack({s.row(r).begin(), s.row(r).end()}, s.q()));
  return oracle::span(gens, s.ambient(), s.q());
}

std::vector<Integer> multiplicities(const SpectrumTable& t) {
  std::vector<Integer> out;
  for (const auto& e : t.entries) out.push_back(e.multiplicity);
  return out;
}

}  // namespace

TEST(Spectrum, KnownMultiplicities) {
  EXPECT_EQ(multiplicities(spectrum(4, 2, 2)), (std::vector<Integer>{1, 14, 20}));
  EXPECT_EQ(multiplicities(spectrum(5, 2, 2)), (std::vector<Integer>{1, 30, 124}));
  auto t = spectrum(4, 2, 2);
  EXPECT_EQ(t.entries[0].lambda, 1);
  EXPECT_EQ(t.entries[1].lambda, Rational(-1, 4));
  EXPECT_EQ(t.entries[2].lambda, Rational(1, 8));
  EXPECT_TRUE(t.report.ok());
  EXPECT_THROW(spectrum(5, 3, 2), std::invalid_argument);
}

TEST(Spectrum, EigenvaluesAreNullitiesOfTheAdjacency) {
  for (auto [n, k, q] : {std::tuple{4, 2, 2}, std::tuple{5, 2, 2}, std::tuple{4, 1, 3}}) {
    Workspace ws(n, k, q, {.dense_budget = 2000});
    IntMatrix m = ws.adjacency().to_dense();
    const auto& t = ws.spectrum();
    for (const auto& e : t.entries) {
      IntMatrix shifted = m;
      for (std::size_t i = 0; i < m.rows(); ++i) shifted(i, i) -= e.mu;
      std::size_t nullity = m.rows() - rank_bareiss(shifted);
      EXPECT_EQ(Integer(static_cast<unsigned long>(nullity)), e.multiplicity) << n << k << q << " i=" << e.i;
    }
  }
}

TEST(Adjacency, MatchesPointSetDisjointness) {
  Workspace ws(4, 2, 3);
  const auto& g = ws.grassmannian(2);
  const auto& m = ws.adjacency();
  std::vector<std::vector<oracle::Point>> pts;
  for (const auto& s : g) pts.push_back(points_of(s));
  for (std::size_t a = 0; a < g.size(); ++a) {
    std::size_t degree = 0;
    for (std::size_t b = 0; b < g.size(); ++b) {
      bool disjoint = oracle::common(pts[a], pts[b]) == 1;
      EXPECT_EQ(m.contains(a, b), disjoint);
      degree += disjoint;
    }
    // q^{k^2} [n-k, k]
    EXPECT_EQ(Integer(static_cast<unsigned long>(degree)), 81 * oracle::gauss(2, 2, 3));
  }
}

TEST(Incidence, InclusionMatchesPointSets) {
  Workspace ws(5, 3, 2);
  for (int i = 0; i <= 3; ++i)
    for (int j = i; j <= 3; ++j) {
      const auto& w = ws.incidence(i, j);
      const auto& gi = ws.grassmannian(i);
      const auto& gj = ws.grassmannian(j);
      for (std::size_t s = 0; s < gi.size(); s += 3)
        for (std::size_t t = 0; t < gj.size(); t += 2) {
          auto ps = points_of(gi[s]), pt = points_of(gj[t]);
          EXPECT_EQ(w.contains(s, t), std::includes(pt.begin(), pt.end(), ps.begin(), ps.end()));
        }
      // every j-subspace contains [j, i] i-subspaces
      for (std::size_t t = 0; t < gj.size(); ++t) {
        std::size_t count = 0;
        for (std::size_t s = 0; s < gi.size(); ++s) count += w.contains(s, t);
        EXPECT_EQ(Integer(static_cast<unsigned long>(count)), oracle::gauss(j, i, 2));
      }
    }
}

TEST(Projectors, InvariantsAndAllOnesProjector) {
  Workspace ws(4, 2, 2);
  const auto& p = ws.projectors();
  EXPECT_TRUE(p.report.ok()) << to_json(p.report, false).dump();
  auto p0 = p.projector(0);
  for (std::size_t r = 0; r < p0.rows(); ++r)
    for (std::size_t c = 0; c < p0.cols(); ++c) EXPECT_EQ(p0(r, c), Rational(1, 35));
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p.projector(static_cast<int>(i)).trace(), Rational(p.spectrum.entries[i].multiplicity));
}

TEST(Projectors, BudgetIsEnforced) {
  Workspace ws(5, 2, 2, {.dense_budget = 100});
  EXPECT_FALSE(ws.dense_feasible());
  EXPECT_THROW(ws.projectors(), BudgetExceeded);
}

TEST(Projection, DenseAndOperatorRoutesAgree) {
  Workspace ws(5, 2, 2);
  auto h = random_rational_vector(155, 4);
  auto dense = project(h, ws.projectors());
  auto op = project(h, ws.kneser(), ws.spectrum(), 1);
  EXPECT_TRUE(dense.report.ok());
  EXPECT_TRUE(op.report.ok());
  ASSERT_EQ(dense.parts.size(), op.parts.size());
  for (std::size_t i = 0; i < dense.parts.size(); ++i) {
    EXPECT_EQ(dense.parts[i], op.parts[i]);
    EXPECT_EQ(dense.norms[i], op.norms[i]);
  }
  // eigenvector check independent of the projector construction: M h_i = mu_i h_i
  for (std::size_t i = 0; i < op.parts.size(); ++i) {
    auto mh = qekr::apply(ws.adjacency(), std::span<const Rational>(op.parts[i]));
    for (std::size_t s = 0; s < mh.size(); ++s) EXPECT_EQ(mh[s], ws.spectrum().entries[i].mu * op.parts[i][s]);
  }
}

TEST(Projection, PencilAtSevenThreeTwo) {
  Workspace ws(7, 3, 2);
  EXPECT_FALSE(ws.dense_feasible());
  const auto& g = ws.grassmannian(3);
  Family f = canonical_pencil(g);
  auto proj = ws.project(f.indicator());
  EXPECT_TRUE(proj.report.ok());
  EXPECT_EQ(proj.norms[0], Rational(4557, 127));
  EXPECT_EQ(proj.norms[2], 0);
  EXPECT_EQ(proj.norms[3], 0);
  EXPECT_EQ(proj.norms[0] + proj.norms[1], 651);
}

TEST(Lagrange, NumeratorVanishesOnOtherEigenvalues) {
  auto t = spectrum(6, 3, 2);
  for (int i = 0; i < static_cast<int>(t.entries.size()); ++i) {
    auto coeffs = lagrange_numerator(t, i);
    for (const auto& e : t.entries) {
      Integer v = 0, x = 1;
      for (const auto& c : coeffs) {
        v += c * x;
        x *= e.mu;
      }
      if (e.i == i)
        EXPECT_EQ(v, lagrange_denominator(t, i));
      else
        EXPECT_EQ(v, 0);
    }
  }
}
