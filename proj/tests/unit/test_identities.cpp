#include "qekr/families.hpp"
#include "qekr/identities.hpp"
#include "qekr/proofchain.hpp"
#include "qekr/qarith.hpp"
#include "qekr/random.hpp"

#include <gtest/gtest.h>

using namespace qekr;

TEST(IncidenceIdentities, AllTriplesAtSmallInstances) {
  for (auto [n, k, q] : {std::tuple{4, 2, 2}, std::tuple{5, 2, 2}, std::tuple{4, 2, 3}, std::tuple{5, 3, 2}}) {
    Workspace ws(n, k, q);
    for (int i = 0; i <= k; ++i)
      for (int j = i; j <= k; ++j)
        for (int r = j; r <= k; ++r) {
          Report rep = verify_incidence_identities(ws, i, j, r);
          EXPECT_TRUE(rep.ok()) << to_json(rep, false).dump();
          EXPECT_TRUE(rep.residual_zero);
        }
  }
}

TEST(IncidenceIdentities, RowSpaceRank) {
  Workspace ws(5, 2, 2);
  for (int i = 0; i <= 2; ++i) {
    Report rep = verify_row_space(ws, i);
    EXPECT_TRUE(rep.ok());
    EXPECT_EQ(rep.values.at("rank").get<std::string>(), to_string(gauss_binom(5, i, 2)));
  }
}

TEST(GramIdentities, ExpansionAndEigenvalues) {
  for (auto [n, k, q] : {std::tuple{4, 2, 2}, std::tuple{5, 2, 2}, std::tuple{6, 2, 2}}) {
    Workspace ws(n, k, q);
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= i; ++j) EXPECT_TRUE(verify_gram_expansion(ws, i, j).ok()) << n << k << q << i << j;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; j <= k; ++j) {
        Report rep = verify_gram_eigenvalue(ws, i, j);
        EXPECT_TRUE(rep.ok()) << n << k << q << i << j;
        if (j > i) EXPECT_EQ(rep.values.at("eigenvalue").get<std::string>(), "0");
      }
  }
}

TEST(DegreeForm, IndicatorsAndRandomVectors) {
  for (auto [n, k, q] : {std::tuple{4, 2, 2}, std::tuple{5, 2, 2}, std::tuple{6, 3, 2}}) {
    Workspace ws(n, k, q);
    const auto& g = ws.grassmannian(k);
    std::vector<RationalVector> vectors{RationalVector(g.size(), 0), canonical_pencil(g).indicator()};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      vectors.push_back(random_intersecting(g, seed, g.size()).indicator());
      vectors.push_back(random_rational_vector(g.size(), seed));
    }
    for (int d = 1; d < k; ++d)
      for (const auto& h : vectors) {
        Report rep = verify_degree_form(ws, d, h);
        EXPECT_TRUE(rep.ok()) << to_json(rep, false).dump();
      }
  }
}

TEST(DegreeForm, CoefficientsAgreeWithDirectQuadraticForm) {
  // (W h)^T W̄ (W h) for h = e_F equals sum_r b_r ||(e_F)_r||^2, and for a single
  // member it also equals the number of ordered disjoint pairs of d-subspaces of F.
  Workspace ws(5, 2, 2);
  RationalVector h(155, 0);
  h[17] = 1;
  Report rep = verify_degree_form(ws, 1, h);
  ASSERT_TRUE(rep.ok());
  EXPECT_EQ(rep.values.at("lhs").get<std::string>(), "6");  // 3 points of a line, ordered distinct pairs
}

TEST(DegreeForm, RequiresAdmissibleRange) {
  Workspace ws(5, 3, 2);
  RationalVector h(155, 0);
  EXPECT_THROW(verify_degree_form(ws, 1, h), std::invalid_argument);
}

TEST(SpectrumCheck, DenseAndFormulaOnly) {
  Workspace small(5, 2, 3);
  Report rep = verify_spectrum(small);
  EXPECT_TRUE(rep.ok());
  Workspace large(7, 3, 2);
  Report big = verify_spectrum(large);
  EXPECT_TRUE(big.ok());
  EXPECT_EQ(big.values.at("scope").get<std::string>(), "formula-consistency only");
}

TEST(Detection, TamperedMatrixIsCaught) {
  Workspace ws(4, 2, 2);
  IntMatrix lhs = ws.disjointness(1, 2).to_dense();
  IntMatrix rhs = lhs;
  rhs(3, 5) += 1;
  auto m = first_mismatch(lhs, rhs);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->row, 3u);
  EXPECT_EQ(m->col, 5u);
}
