#include "qekr/proofchain.hpp"

#include "qekr/parallel.hpp"
#include "qekr/qarith.hpp"

#include <functional>
#include <sstream>
#include <stdexcept>

namespace qekr {
namespace {

Rational gb(long m, long k, long q) { return Rational(gauss_binom(m, k, q)); }
Rational pw(long q, long e) { return qpow(q, e); }
Rational br(long x, long i, long q) { return Rational(bracket(x, i, q)); }

Rational canon(Rational v) {
  v.canonicalize();
  return v;
}

json base_params(long n, long k, long d, long q) { return {{"n", n}, {"k", k}, {"d", d}, {"q", q}}; }

// Collects assertions; outside the stated range a false assertion is recorded
// as a note and the report is labelled range-extrapolation instead of failing.
class Asserter {
 public:
  Asserter(Report& rep, bool in_range, const std::string& range) : rep_(rep), in_range_(in_range) {
    rep_.values["in_range"] = in_range;
    if (!in_range) {
      rep_.status = Status::range_extrapolation;
      rep_.note("outside the stated range " + range);
    }
  }
  void that(bool cond, const std::string& what, json witness = nullptr) {
    if (cond) return;
    if (in_range_)
      rep_.fail(what, std::move(witness));
    else
      rep_.note("does not hold here: " + what);
  }
  void equal(const Rational& lhs, const Rational& rhs, const std::string& what) {
    if (lhs == rhs) return;
    if (in_range_)
      rep_.fail_residual(what, json{{"lhs", to_string(lhs)}, {"rhs", to_string(rhs)}});
    else
      rep_.note("does not hold here: " + what);
  }
 private:
  Report& rep_;
  bool in_range_;
};

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

}  // namespace

Rational kneser_eigenvalue(long n, long k, long i, long q) {
  return canon(Rational(sign_pow(i)) * pw(q, choose2(i) - k * i) * gb(n - k - i, k - i, q));
}

Rational tail_constant(long n, long k, long d, long q) {
  require(n > k, "tail constant requires n > k");
  return canon((pw(q, k) - pw(q, d)) / (pw(q, n) - pw(q, k)) * gb(n - k, k, q));
}

Integer degree_form_coefficient(long n, long k, long d, long r, long q) {
  require(0 <= r && r <= d && d < k && n >= 2 * d, "degree form coefficient requires 0 <= r <= d < k, n >= 2d");
  long e = k * r + (d - r) * (d - r) - choose2(r + 1);
  return sign_pow(r) * ipow(q, static_cast<unsigned long>(e)) * gauss_binom(k - r, d - r, q) *
         gauss_binom(n - d - r, d - r, q) * gauss_binom(n - d - r, k - d, q);
}

CoefficientSet coefficients(long n, long k, long d, long q) {
  require_prime_power(q);
  require(0 <= d && d < k && n >= 2 * k, "coefficients require 0 <= d < k and n >= 2k");
  CoefficientSet cs;
  cs.n = n;
  cs.k = k;
  cs.d = d;
  cs.q = q;
  cs.report = Report("coefficients", base_params(n, k, d, q));
  cs.c = tail_constant(n, k, d, q);
  for (long i = 0; i <= d; ++i) {
    cs.a.push_back(canon(cs.c + kneser_eigenvalue(n, k, i, q)));
    cs.b.push_back(Rational(degree_form_coefficient(n, k, d, i, q)));
  }
  Rational common = pw(q, d * d) * gb(k, d, q) * gb(n - d, d, q);
  cs.f = canon(2 * common * gb(n - d - 1, k - d - 1, q));
  cs.g = canon(pw(q, d * d) * gb(n, d, q) * gb(n - d, d, q) * gb(n - d - 1, k - d - 1, q) *
               gb(n - d - 1, k - d - 1, q));

  auto& rep = cs.report;
  json a = json::array(), b = json::array();
  for (const auto& v : cs.a) a.push_back(to_string(v));
  for (const auto& v : cs.b) b.push_back(to_string(v));
  rep.values["a"] = a;
  rep.values["b"] = b;
  rep.values["c"] = to_string(cs.c);
  rep.values["f"] = to_string(cs.f);
  rep.values["g"] = to_string(cs.g);
  {
    Asserter check(rep, d >= 2 && n >= 2 * k + 1, "k > d >= 2, n >= 2k+1");
    if (d >= 1) {
      Rational simplified = canon((1 - pw(q, d)) / (pw(q, n) - pw(q, k)) * gb(n - k, k, q));
      check.equal(cs.a[1], simplified, "a_1 differs from (1-q^d)/(q^n-q^k)[n-k,k]");
      check.that(sgn(cs.a[1]) < 0, "a_1 is not negative");
      check.that(sgn(cs.b[1]) < 0, "b_1 is not negative");
      rep.values["lhs"] = to_string(cs.a[1]);
      rep.values["rhs"] = to_string(cs.b[1]);
    }
  }
  return cs;
}

Report check_eigenvalue_tail(long n, long k, long d, long i, long q) {
  Report rep("eigenvalue_tail_bound", base_params(n, k, d, q));
  rep.params["i"] = i;
  require_prime_power(q);
  require(d >= 0 && d + 1 <= i && i <= k && n >= 2 * k, "eigenvalue tail requires d+1 <= i <= k, n >= 2k");
  Rational lhs = canon(pw(q, choose2(i) - k * i) * gb(n - k - i, k - i, q));
  Rational mid = canon(pw(q, choose2(d + 1) - k * (d + 1)) * gb(n - k - d - 1, k - d - 1, q));
  Rational rhs = tail_constant(n, k, d, q);
  rep.values["lhs"] = to_string(lhs);
  rep.values["mid"] = to_string(mid);
  rep.values["rhs"] = to_string(rhs);
  Asserter check(rep, n >= 2 * k + 1, "k >= i >= d+1, n >= 2k+1");
  check.that(lhs <= mid, "|lambda_i| exceeds |lambda_{d+1}|");
  check.that((lhs == mid) == (i == d + 1), "equality |lambda_i| = |lambda_{d+1}| does not match i = d+1");
  check.that(mid < rhs, "|lambda_{d+1}| is not below c");
  return rep;
}

Report check_quadratic_coefficient(long n, long k, long d, long q) {
  Report rep("quadratic_coefficient_closed_form", base_params(n, k, d, q));
  require(d >= 1, "requires d >= 1");
  CoefficientSet cs = coefficients(n, k, d, q);
  Rational lhs = canon(cs.b[0] - cs.a[0] * cs.b[1] / cs.a[1]);
  Rational rhs = canon(pw(q, d * d) * (pw(q, k - d) - 1) * (pw(q, n) - 1) /
                       ((pw(q, k) - 1) * (pw(q, n - d) - 1)) * gb(k, d, q) * gb(n - d, k - d, q) *
                       gb(n - d, d, q));
  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  Asserter check(rep, d >= 2 && n >= 2 * k + 1, "k > d >= 2, n >= 2k+1");
  check.equal(lhs, rhs, "b_0 - a_0 b_1/a_1 differs from its closed form");
  return rep;
}

Report check_linear_coefficient(long n, long k, long d, long q) {
  Report rep("linear_coefficient_closed_form", base_params(n, k, d, q));
  require(d >= 1, "requires d >= 1");
  CoefficientSet cs = coefficients(n, k, d, q);
  Rational lhs = canon(cs.f - cs.c * cs.b[1] / cs.a[1]);
  Rational poly = 2 * pw(q, k + n - d) - pw(q, n) - pw(q, n - d) - pw(q, k) - pw(q, k - d) + 2;
  Rational rhs = canon(pw(q, d * d) * poly / ((pw(q, k) - 1) * (pw(q, n - d) - 1)) * gb(k, d, q) *
                       gb(n - d - 1, k - d - 1, q) * gb(n - d, d, q));
  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  Asserter check(rep, d >= 2 && n >= 2 * k + 1, "k > d >= 2, n >= 2k+1");
  check.equal(lhs, rhs, "f - c b_1/a_1 differs from its closed form");
  return rep;
}

RatioQuantities ratio_quantities(long n, long k, long d, long i, long q) {
  require(1 <= i && i <= d && d < k && n >= 2 * k, "ratio quantities require 1 <= i <= d < k, n >= 2k");
  RatioQuantities r;
  r.S = canon(pw(q, choose2(i) - k * i + k) * br(k - 1, i - 1, q) / br(n - k - 1, i - 1, q));
  Rational bd = br(d - 1, i - 1, q), bn = br(n - d - 1, i - 1, q);
  r.T = canon(pw(q, (k - 2 * d) * (i - 1) + choose2(i)) * bd * bd * br(n - k - 1, i - 1, q) /
              (br(k - 1, i - 1, q) * bn * bn));
  // alpha_i as a product of per-step factors, independent of the bracket form above
  Rational alpha = pw(q, choose2(i) - k * i + k);
  for (long j = 0; j < i - 1; ++j) alpha *= (pw(q, k - 1 - j) - 1) / (pw(q, n - k - 1 - j) - 1);
  Rational beta = pw(q, choose2(i) - d * i + d);
  for (long j = 0; j < i - 1; ++j) beta *= (pw(q, d - 1 - j) - 1) / (pw(q, n - d - 1 - j) - 1);
  r.alpha = canon(alpha);
  r.beta = canon(beta);
  return r;
}

Report check_ratio_inequality(long n, long k, long d, long i, long q) {
  Report rep("ratio_inequality", base_params(n, k, d, q));
  rep.params["i"] = i;
  require_prime_power(q);
  require(1 <= i && i <= d && d < k && n >= 2 * k, "ratio inequality requires 1 <= i <= d < k, n >= 2k");
  RatioQuantities r = ratio_quantities(n, k, d, i, q);
  Rational lhs = canon((pw(q, k) - 1) * r.S - (pw(q, d) - 1) * r.T);
  Rational rhs = canon(pw(q, k) - pw(q, d));
  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  rep.values["S"] = to_string(r.S);
  rep.values["T"] = to_string(r.T);
  rep.values["alpha"] = to_string(r.alpha);
  rep.values["beta"] = to_string(r.beta);
  Asserter check(rep, i >= 3, "3 <= i <= d < k, 2k <= n");
  check.equal(r.S, r.alpha, "S_i differs from alpha_i");
  check.equal(r.T, canon(r.beta * r.beta / r.alpha), "T_i differs from beta_i^2/alpha_i");
  check.that(lhs < rhs, "(q^k-1)S_i - (q^d-1)T_i is not below q^k - q^d");
  if (i + 1 <= d) {
    RatioQuantities s = ratio_quantities(n, k, d, i + 1, q);
    Rational ratio = canon(s.alpha / r.alpha);
    check.equal(ratio, canon((1 - pw(q, i - k)) / (pw(q, n - k - i) - 1)),
                "alpha_{i+1}/alpha_i differs from (1-q^{i-k})/(q^{n-k-i}-1)");
    check.that(ratio < 1, "alpha_{i+1}/alpha_i is not below 1");
    check.that(s.beta / s.alpha < r.beta / r.alpha, "beta_i/alpha_i is not decreasing");
    check.that(r.alpha - r.beta > s.alpha - s.beta, "alpha_i - beta_i is not decreasing");
    rep.values["monotonicity_checked"] = true;
  } else {
    rep.values["monotonicity_checked"] = false;
  }
  return rep;
}

Report check_coefficient_dominance(long n, long k, long d, long i, long q) {
  Report rep("coefficient_dominance", base_params(n, k, d, q));
  rep.params["i"] = i;
  require(2 <= i && i <= d && d < k && n >= 2 * k, "coefficient dominance requires 2 <= i <= d < k, n >= 2k");
  CoefficientSet cs = coefficients(n, k, d, q);
  Rational lhs = cs.b[i];
  Rational rhs = canon(cs.a[i] * cs.b[1] / cs.a[1]);
  rep.values["lhs"] = to_string(lhs);
  rep.values["rhs"] = to_string(rhs);
  RatioQuantities r = ratio_quantities(n, k, d, i, q);
  Rational reduced = canon(Rational(sign_pow(i)) * ((pw(q, d) - 1) * r.T - (pw(q, k) - 1) * r.S));
  Rational bound = canon(pw(q, k) - pw(q, d));
  Asserter check(rep, true, "");
  check.that(lhs < rhs, "b_i is not below a_i b_1/a_1");
  check.that((lhs < rhs) == (reduced < bound),
             "b_i < a_i b_1/a_1 disagrees with its reduction to S_i and T_i");
  if (i % 2 == 0) {
    rep.values["branch"] = "even";
    check.that(r.S > r.T, "S_i is not above T_i");
  } else {
    rep.values["branch"] = "odd";
    check.that(canon((pw(q, k) - 1) * r.S - (pw(q, d) - 1) * r.T) < bound,
               "ratio inequality fails for odd i");
  }
  return rep;
}

namespace {

struct Quadratic {
  Rational x2, x1, x0;
  Rational at(const Rational& x) const { return canon(x2 * x * x + x1 * x + x0); }
};

struct FactorData {
  Quadratic definitional, factored;
  Rational sigma, a_root, b_root;
};

FactorData factor_data(long n, long k, long d, long q) {
  CoefficientSet cs = coefficients(n, k, d, q);
  FactorData fd;
  Rational lead = cs.b[0] - cs.a[0] * cs.b[1] / cs.a[1];
  Rational lin = cs.f - cs.c * cs.b[1] / cs.a[1];
  fd.definitional = {canon(lead / gb(n, k, q)), canon(-lin), cs.g};
  fd.a_root = gb(n - 1, k - 1, q);
  fd.b_root = canon(gb(n - d - 1, k - d - 1, q) * gb(n, d, q) / gb(k, d, q));
  fd.sigma = canon(pw(q, d * d) * gb(k, d, q) * gb(n - d - 1, k - d - 1, q) * gb(n - d, d, q) / fd.a_root);
  fd.factored = {fd.sigma, canon(-fd.sigma * (fd.a_root + fd.b_root)), canon(fd.sigma * fd.a_root * fd.b_root)};
  return fd;
}

}  // namespace

Report check_factorization(long n, long k, long d, long q) {
  Report rep("quadratic_factorization", base_params(n, k, d, q));
  require(d >= 1, "requires d >= 1");
  FactorData fd = factor_data(n, k, d, q);
  rep.values["lhs"] = json::array({to_string(fd.definitional.x2), to_string(fd.definitional.x1),
                                   to_string(fd.definitional.x0)});
  rep.values["rhs"] = json::array({to_string(fd.factored.x2), to_string(fd.factored.x1),
                                   to_string(fd.factored.x0)});
  rep.values["sigma"] = to_string(fd.sigma);
  Asserter check(rep, d >= 2 && n >= 2 * k + 1, "k > d >= 2, n >= 2k+1");
  check.equal(fd.definitional.x2, fd.factored.x2, "x^2 coefficient mismatch");
  check.equal(fd.definitional.x1, fd.factored.x1, "x coefficient mismatch");
  check.equal(fd.definitional.x0, fd.factored.x0, "constant coefficient mismatch");
  check.that(sgn(fd.sigma) > 0, "sigma is not positive");
  Rational via_ratio = canon(gb(n, k, q) * (pw(q, k - d) - 1) / (pw(q, n - d) - 1));
  check.equal(canon(fd.a_root + via_ratio), canon(fd.a_root + fd.b_root),
              "[n,k](q^{k-d}-1)/(q^{n-d}-1) differs from [n-d-1,k-d-1][n,d]/[k,d]");
  return rep;
}

Report final_counting_bound(long n, long k, long d, long q) {
  Report rep("final_counting_bound", base_params(n, k, d, q));
  require(d >= 1, "requires d >= 1");
  FactorData fd = factor_data(n, k, d, q);
  const Quadratic& qd = fd.definitional;
  rep.values["lhs"] = to_string(fd.b_root);
  rep.values["rhs"] = to_string(fd.a_root);
  std::string order = fd.b_root < fd.a_root ? "B < A" : (fd.b_root == fd.a_root ? "B = A" : "B > A");
  rep.values["order"] = order;
  Asserter check(rep, d >= 2 && n >= 2 * k + 1, "k > d >= 2, n >= 2k+1");
  check.that(sgn(fd.sigma) > 0, "sigma is not positive");
  check.that(sgn(qd.at(fd.a_root)) == 0, "[n-1,k-1] is not a root of the quadratic");
  check.that(sgn(qd.at(fd.b_root)) == 0, "[n,d][n-d-1,k-d-1]/[k,d] is not a root of the quadratic");
  check.that(fd.a_root != fd.b_root, "the two roots coincide");
  Rational mid = canon((fd.a_root + fd.b_root) / 2);
  check.that(sgn(qd.at(mid)) < 0, "the quadratic is not negative between its roots");
  if (fd.b_root < fd.a_root)
    rep.note("B < A: x > B together with a positive quadratic leaves only x > A");
  else
    rep.note("B >= A: x > B already gives x > A");
  return rep;
}

std::vector<Report> sweep_proofchain(const SweepGrid& grid, int jobs) {
  std::vector<std::function<Report()>> tasks;
  for (long q : grid.qs)
    for (long k = 2; k <= grid.k_max; ++k)
      for (long d = 1; d < k; ++d)
        for (long n = 2 * k; n <= grid.n_max; ++n) {
          const bool strict = n >= 2 * k + 1;
          if (d >= 2 && strict) {
            tasks.emplace_back([=] { return coefficients(n, k, d, q).report; });
            tasks.emplace_back([=] { return check_quadratic_coefficient(n, k, d, q); });
            tasks.emplace_back([=] { return check_linear_coefficient(n, k, d, q); });
            tasks.emplace_back([=] { return check_factorization(n, k, d, q); });
            tasks.emplace_back([=] { return final_counting_bound(n, k, d, q); });
          }
          if (strict)
            for (long i = d + 1; i <= k; ++i)
              tasks.emplace_back([=] { return check_eigenvalue_tail(n, k, d, i, q); });
          for (long i = 3; i <= d; ++i)
            tasks.emplace_back([=] { return check_ratio_inequality(n, k, d, i, q); });
          for (long i = 2; i <= d; ++i)
            tasks.emplace_back([=] { return check_coefficient_dominance(n, k, d, i, q); });
        }
  std::vector<Report> out(tasks.size());
  parallel_for(tasks.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      try {
        out[t] = tasks[t]();
      } catch (const std::exception& e) {
        out[t] = Report("sweep_task", json{{"task", t}});
        out[t].status = Status::error;
        out[t].note(e.what());
      }
    }
  });
  return out;
}

std::string sweep_csv(const std::vector<Report>& reports) {
  std::ostringstream os;
  os << "n,k,d,i,q,check,pass,lhs,rhs\n";
  auto field = [](const json& p, const char* key) -> std::string {
    return p.contains(key) ? p.at(key).dump() : "";
  };
  auto value = [](const json& v, const char* key) -> std::string {
    if (!v.contains(key)) return "";
    const json& x = v.at(key);
    if (x.is_string()) return x.get<std::string>();
    std::string s;
    for (const auto& e : x) s += (s.empty() ? "" : " ") + (e.is_string() ? e.get<std::string>() : e.dump());
    return s;
  };
  for (const auto& r : reports)
    os << field(r.params, "n") << ',' << field(r.params, "k") << ',' << field(r.params, "d") << ','
       << field(r.params, "i") << ',' << field(r.params, "q") << ',' << r.check << ','
       << (r.ok() ? "true" : "false") << ',' << value(r.values, "lhs") << ',' << value(r.values, "rhs")
       << '\n';
  return os.str();
}

}  // namespace qekr
