#include "qekr/identities.hpp"

#include "qekr/proofchain.hpp"
#include "qekr/qarith.hpp"

#include <string>
#include <vector>

namespace qekr {
namespace {

json params_of(const Workspace& ws, std::initializer_list<std::pair<const char*, int>> extra) {
  json p = ws.params();
  for (const auto& [key, v] : extra) p[key] = v;
  return p;
}

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

std::string key_of(const std::string& name, std::initializer_list<int> args) {
  std::string k = name;
  for (int a : args) k += ":" + std::to_string(a);
  return k;
}

template <class F>
Report memoized(const Workspace& ws, const std::string& key, F&& compute) {
  if (const Report* r = ws.memo(key)) return *r;
  Report r = compute();
  ws.remember(key, r);
  return r;
}

void compare(Report& rep, const IntMatrix& lhs, const IntMatrix& rhs, const std::string& what) {
  if (auto w = first_mismatch(lhs, rhs)) rep.fail_residual(what, w->to_json());
}

void compare(Report& rep, const RationalMatrix& lhs, const RationalMatrix& rhs, const std::string& what) {
  if (auto w = first_mismatch(lhs, rhs)) rep.fail_residual(what, w->to_json());
}

}  // namespace

Report verify_disjointness_expansion(const Workspace& ws, int i, int j) {
  require(0 <= i && i <= j && j <= ws.n(), "disjointness expansion requires 0 <= i <= j <= n");
  return memoized(ws, key_of("disjointness_expansion", {i, j}), [&] {
    Report rep("disjointness_expansion", params_of(ws, {{"i", i}, {"j", j}}));
    ReportTimer timer(rep);
    IntMatrix rhs(ws.space(i), ws.space(j));
    for (int m = 0; m <= i; ++m) {
      Integer coeff = sign_pow(m) * ipow(ws.q(), static_cast<unsigned long>(choose2(m)));
      rhs.add_scaled(coeff, multiply_transposed(ws.incidence(m, i), ws.incidence(m, j)));
    }
    compare(rep, ws.disjointness(i, j).to_dense(), rhs, "W̄_{i,j} differs from its inclusion expansion");
    return rep;
  });
}

Report verify_inclusion_expansion(const Workspace& ws, int i, int j) {
  require(0 <= i && i <= j && j <= ws.n(), "inclusion expansion requires 0 <= i <= j <= n");
  return memoized(ws, key_of("inclusion_expansion", {i, j}), [&] {
    Report rep("inclusion_expansion", params_of(ws, {{"i", i}, {"j", j}}));
    ReportTimer timer(rep);
    std::vector<IntMatrix> products;
    products.reserve(i + 1);
    std::vector<ScaledTerm> terms;
    for (int m = 0; m <= i; ++m) {
      products.push_back(multiply_transposed(ws.incidence(m, i), ws.disjointness(m, j)));
      terms.push_back({Rational(sign_pow(m)) * qpow(ws.q(), choose2(m + 1) - static_cast<long>(m) * i),
                       &products.back()});
    }
    compare(rep, RationalMatrix(ws.incidence(i, j).to_dense()), combine(terms),
            "W_{i,j} differs from its disjointness expansion");
    return rep;
  });
}

Report verify_inclusion_product(const Workspace& ws, int i, int j, int r) {
  require(0 <= i && i <= j && j <= r && r <= ws.n(), "inclusion product requires 0 <= i <= j <= r <= n");
  Report rep("inclusion_product", params_of(ws, {{"i", i}, {"j", j}, {"r", r}}));
  ReportTimer timer(rep);
  IntMatrix lhs = multiply(ws.incidence(i, j), ws.incidence(j, r));
  IntMatrix rhs = ws.incidence(i, r).to_dense();
  Integer factor = gauss_binom(r - i, j - i, ws.q());
  rhs *= factor;
  rep.values["factor"] = to_string(factor);
  compare(rep, lhs, rhs, "W_{i,j} W_{j,r} differs from [r-i, j-i] W_{i,r}");
  return rep;
}

Report verify_row_space(const Workspace& ws, int i) {
  const int k = ws.k();
  require(0 <= i && i <= k, "row space check requires 0 <= i <= k");
  return memoized(ws, key_of("row_space", {i}), [&] {
    Report rep("row_space", params_of(ws, {{"i", i}}));
    ReportTimer timer(rep);
    const Incidence& w = ws.incidence(i, k);
    RankResult rank = rank_over_rationals(w);
    Integer expected = gauss_binom(ws.n(), i, ws.q());
    Integer cols = gauss_binom(ws.n(), k, ws.q());
    if (cols < expected) expected = cols;
    rep.values["rank"] = std::to_string(rank.rank);
    rep.values["expected_rank"] = to_string(expected);
    rep.values["rank_method"] = rank.full_by_modular ? "modular" : "fraction-free";
    if (Integer(std::to_string(rank.rank)) != expected)
      rep.fail_residual("rank of W_{i,k} differs from min([n, i], [n, k])");
    if (i < k) {
      if (ws.n() < 2 * k) {
        rep.values["projector_part"] = "skipped";
        rep.note("W_{i,k} P_m = 0 not checked: the eigenspace decomposition needs n >= 2k");
      } else if (ws.dense_feasible()) {
        const ProjectorSet& p = ws.projectors();
        for (int m = i + 1; m <= k; ++m) {
          IntMatrix prod = multiply(w, p.numerators[m], ws.jobs());
          if (!prod.is_zero()) {
            auto wit = first_mismatch(prod, IntMatrix(prod.row_space(), prod.col_space()));
            json j = wit->to_json();
            j["m"] = m;
            rep.fail_residual("W_{i,k} P_m is not zero", j);
          }
        }
        rep.values["projector_part"] = "checked";
      } else {
        rep.values["projector_part"] = "skipped";
        rep.note("W_{i,k} P_m = 0 not checked: [n, k] exceeds the dense budget");
      }
    }
    return rep;
  });
}

Report verify_incidence_identities(const Workspace& ws, int i, int j, int r) {
  require(0 <= i && i <= j && j <= r && r <= ws.k(), "incidence identities require 0 <= i <= j <= r <= k");
  Report rep("incidence_identities", params_of(ws, {{"i", i}, {"j", j}, {"r", r}}));
  ReportTimer timer(rep);
  merge_part(rep, "disjointness_expansion", verify_disjointness_expansion(ws, i, j));
  merge_part(rep, "inclusion_expansion", verify_inclusion_expansion(ws, i, j));
  merge_part(rep, "inclusion_product", verify_inclusion_product(ws, i, j, r));
  merge_part(rep, "row_space", verify_row_space(ws, i));
  return rep;
}

Report verify_gram_expansion(const Workspace& ws, int i, int j) {
  const int n = ws.n(), k = ws.k(), q = ws.q();
  require(0 <= j && j <= i && i <= k && k < n, "gram expansion requires 0 <= j <= i <= k < n");
  Report rep("gram_expansion", params_of(ws, {{"i", i}, {"j", j}}));
  ReportTimer timer(rep);
  IntMatrix lhs = multiply(ws.incidence(i, k), ws.incidence(j, k).transpose());
  std::vector<IntMatrix> products;
  products.reserve(j + 1);
  std::vector<ScaledTerm> terms;
  for (int m = 0; m <= j; ++m) {
    Integer binom = gauss_binom(n - i - j, n - k - m, q);
    if (sgn(binom) == 0) continue;
    products.push_back(multiply_transposed(ws.incidence(m, i), ws.incidence(m, j)));
    terms.push_back({qpow(q, static_cast<long>(m) * (k + m - i - j)) * Rational(binom), &products.back()});
  }
  RationalMatrix rhs = terms.empty() ? RationalMatrix(IntMatrix(lhs.row_space(), lhs.col_space()))
                                     : combine(terms);
  compare(rep, RationalMatrix(lhs), rhs, "W_{i,k} W_{j,k}^T differs from its expansion");
  return rep;
}

Report verify_gram_eigenvalue(const Workspace& ws, int i, int j) {
  const int n = ws.n(), k = ws.k(), q = ws.q();
  require(0 <= i && i <= k && 0 <= j && j <= k, "gram eigenvalue requires 0 <= i, j <= k");
  Report rep("gram_eigenvalue", params_of(ws, {{"i", i}, {"j", j}}));
  ReportTimer timer(rep);
  Integer c = 0;
  if (j <= i)
    c = ipow(q, static_cast<unsigned long>(j) * (k - i)) * gauss_binom(k - j, k - i, q) *
        gauss_binom(n - i - j, k - i, q);
  rep.values["eigenvalue"] = to_string(c);
  rep.values["case"] = j <= i ? "j <= i" : "i < j";
  const ProjectorSet& p = ws.projectors();
  const Incidence& w = ws.incidence(i, k);
  IntMatrix lhs = multiply_transposed(w, multiply(w, p.numerators[j], ws.jobs()), ws.jobs());
  IntMatrix rhs = p.numerators[j];
  rhs *= c;
  compare(rep, lhs, rhs, "W_{i,k}^T W_{i,k} P_j differs from c P_j");
  return rep;
}

Report verify_degree_form_matrix(const Workspace& ws, int d) {
  const int k = ws.k(), q = ws.q();
  require(0 <= d && d <= k, "degree form matrix requires 0 <= d <= k");
  return memoized(ws, key_of("degree_form_matrix", {d}), [&] {
    Report rep("degree_form_matrix", params_of(ws, {{"d", d}}));
    ReportTimer timer(rep);
    const Incidence& w = ws.incidence(d, k);
    IntMatrix lhs = multiply_transposed(w, multiply(ws.disjointness(d, d), w), ws.jobs());
    IntMatrix rhs(ws.space(k), ws.space(k));
    for (int i = 0; i <= d; ++i) {
      Integer b = gauss_binom(k - i, d - i, q);
      Integer coeff = sign_pow(i) * ipow(q, static_cast<unsigned long>(choose2(i))) * b * b;
      rhs.add_scaled(coeff, multiply_transposed(ws.incidence(i, k), ws.incidence(i, k)));
    }
    compare(rep, lhs, rhs, "W_{d,k}^T W̄_{d,d} W_{d,k} differs from its expansion");
    return rep;
  });
}

Report verify_degree_form(const Workspace& ws, int d, std::span<const Rational> h) {
  const int n = ws.n(), k = ws.k(), q = ws.q();
  require(k > d && d >= 1 && n >= 2 * k, "degree form requires k > d >= 1 and n >= 2k");
  Report rep("degree_form", params_of(ws, {{"d", d}}));
  ReportTimer timer(rep);
  const Incidence& w = ws.incidence(d, k);
  RationalVector u = qekr::apply(w, h);
  RationalVector v = apply(ws.disjointness(d, d), std::span<const Rational>(u));
  Rational lhs = dot(u, v);

  Projection proj = ws.project(h);
  Rational rhs = 0;
  for (int r = 0; r <= d; ++r) rhs += Rational(degree_form_coefficient(n, k, d, r, q)) * proj.norms[r];
  rhs.canonicalize();
  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  if (lhs != rhs)
    rep.fail_residual("quadratic form differs from its spectral expansion",
                      json{{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}});
  merge_part(rep, "projection", proj.report);
  merge_part(rep, "matrix_identity", verify_degree_form_matrix(ws, d));
  return rep;
}

Report verify_spectrum(const Workspace& ws) {
  Report rep("spectrum", ws.params());
  ReportTimer timer(rep);
  const SpectrumTable& s = ws.spectrum();
  merge_part(rep, "formula", s.report);
  json mult = json::array(), lambda = json::array();
  for (const auto& e : s.entries) {
    mult.push_back(to_string(e.multiplicity));
    lambda.push_back(to_string(e.lambda));
  }
  rep.values["multiplicities"] = mult;
  rep.values["eigenvalues"] = lambda;
  if (!s.distinct) return rep;
  if (!ws.dense_feasible()) {
    rep.values["scope"] = "formula-consistency only";
    rep.note("[n, k] exceeds the dense budget; only trace and multiplicity consistency verified");
    return rep;
  }
  rep.values["scope"] = "full";
  const Incidence& m = ws.adjacency();
  Report adj("adjacency", ws.params());
  Integer expected_degree = s.entries.front().mu;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (m.contains(r, r)) {
      adj.fail("adjacency has a nonzero diagonal entry", json{{"row", r}});
      break;
    }
    if (Integer(std::to_string(m.row(r).size())) != expected_degree) {
      adj.fail("row sum differs from q^{k^2}[n-k, k]", json{{"row", r}});
      break;
    }
  }
  for (std::size_t r = 0; r < m.rows() && adj.ok(); ++r)
    for (auto c : m.row(r))
      if (!m.contains(c, r)) {
        adj.fail("adjacency is not symmetric", json{{"row", r}, {"col", c}});
        break;
      }
  adj.values["degree"] = to_string(expected_degree);
  merge_part(rep, "adjacency", adj);
  merge_part(rep, "projectors", ws.projectors().report);
  return rep;
}

}  // namespace qekr
