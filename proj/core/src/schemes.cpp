#include "qekr/schemes.hpp"

#include "qekr/parallel.hpp"
#include "qekr/qarith.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace qekr {
namespace {

void require_same_ambient(const GrassmannIndex& a, const GrassmannIndex& b) {
  if (a.ambient() != b.ambient() || a.q() != b.q())
    throw std::invalid_argument("Grassmannians over different ambient spaces");
}

Integer size_of(std::size_t v) { return Integer(std::to_string(v)); }

Integer common_denominator(std::span<const Rational> v) {
  Integer l = 1;
  for (const auto& x : v) l = lcm(l, x.get_den());
  return l;
}

IntVector scale_to_integers(std::span<const Rational> v, const Integer& den) {
  IntVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].get_num() * (den / v[i].get_den());
  return out;
}

Integer int_dot(const IntVector& a, const IntVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (sgn(a[i]) != 0 && sgn(b[i]) != 0) mpz_addmul(s.get_mpz_t(), a[i].get_mpz_t(), b[i].get_mpz_t());
  return s;
}

// h_i = y_i / (D_i * den), where x = den * h is the integer input and y_i = N_i x.
Projection assemble(std::span<const Rational> h, const IntVector& x, const Integer& den,
                    std::vector<IntVector> y, const std::vector<Integer>& d, json params) {
  Projection out;
  out.report = Report("projection", std::move(params));
  const std::size_t parts = y.size(), len = x.size();
  out.parts.assign(parts, RationalVector(len));
  for (std::size_t i = 0; i < parts; ++i) {
    Integer scale = d[i] * den;
    for (std::size_t c = 0; c < len; ++c) {
      out.parts[i][c] = Rational(y[i][c], scale);
      out.parts[i][c].canonicalize();
    }
  }

  Integer big = 1;
  for (const auto& v : d) big = lcm(big, abs(v));
  for (std::size_t c = 0; c < len; ++c) {
    Integer sum = 0;
    for (std::size_t i = 0; i < parts; ++i) sum += (big / d[i]) * y[i][c];
    if (sum != big * x[c]) {
      out.report.fail_residual("sum of components differs from h",
                               json{{"coordinate", c}, {"h", to_string(h[c])}});
      break;
    }
  }

  out.norms.resize(parts);
  Rational total = 0;
  for (std::size_t i = 0; i < parts; ++i) {
    for (std::size_t j = i; j < parts; ++j) {
      Integer ip = int_dot(y[i], y[j]);
      if (i == j) {
        out.norms[i] = Rational(ip, d[i] * d[i] * den * den);
        out.norms[i].canonicalize();
        total += out.norms[i];
      } else if (sgn(ip) != 0) {
        out.report.fail_residual("components are not orthogonal", json{{"i", i}, {"j", j}});
      }
    }
  }
  out.total_norm = dot(h, h);
  if (total != out.total_norm) out.report.fail_residual("sum of component norms differs from ||h||^2");
  json norms = json::array();
  for (const auto& v : out.norms) norms.push_back(to_string(v));
  out.report.values["norms"] = norms;
  out.report.values["total_norm"] = to_string(out.total_norm);
  return out;
}

}  // namespace

Incidence build_incidence(const GrassmannIndex& rows, const GrassmannIndex& cols) {
  require_same_ambient(rows, cols);
  const int i = rows.dim(), j = cols.dim(), n = rows.ambient();
  if (i > j) throw std::invalid_argument("W_{i,j} requires i <= j");
  std::vector<std::vector<std::uint32_t>> lists(rows.size());
  if (i == 0) {
    for (std::size_t t = 0; t < cols.size(); ++t) lists[0].push_back(static_cast<std::uint32_t>(t));
  } else if (i == j) {
    for (std::size_t s = 0; s < rows.size(); ++s) lists[s].push_back(static_cast<std::uint32_t>(s));
  } else {
    // Every i-subspace of T is L * B_T for an i-subspace L of F_q^j.
    const FiniteField& f = rows.field();
    GrassmannIndex local = enumerate(j, i, rows.field_ptr(), std::numeric_limits<std::uint64_t>::max());
    std::vector<Element> buf(static_cast<std::size_t>(i) * n);
    for (std::size_t t = 0; t < cols.size(); ++t) {
      const Subspace& big = cols[t];
      for (const Subspace& l : local) {
        std::fill(buf.begin(), buf.end(), 0);
        for (int r = 0; r < i; ++r)
          for (int m = 0; m < j; ++m) {
            Element coeff = l.at(r, m);
            if (coeff == 0) continue;
            for (int c = 0; c < n; ++c)
              buf[static_cast<std::size_t>(r) * n + c] =
                  f.add(buf[static_cast<std::size_t>(r) * n + c], f.mul(coeff, big.at(m, c)));
          }
        lists[rows.index_of(rref_canonical(f, n, buf))].push_back(static_cast<std::uint32_t>(t));
      }
    }
  }
  return Incidence(IndexSpace::of(rows), IndexSpace::of(cols), std::move(lists));
}

Incidence build_disjointness(const GrassmannIndex& rows, const GrassmannIndex& cols, int jobs) {
  require_same_ambient(rows, cols);
  std::vector<std::vector<std::uint32_t>> lists(rows.size());
  const bool fast = rows.has_point_sets() && cols.has_point_sets();
  parallel_for(rows.size(), jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s)
      for (std::size_t t = 0; t < cols.size(); ++t) {
        bool disjoint = fast ? rows.points(s).count_common(cols.points(t)) == 1
                             : meet_dim(rows.field(), rows[s], cols[t]) == 0;
        if (disjoint) lists[s].push_back(static_cast<std::uint32_t>(t));
      }
  });
  return Incidence(IndexSpace::of(rows), IndexSpace::of(cols), std::move(lists));
}

Incidence qkneser_adjacency(const GrassmannIndex& g, int jobs) { return build_disjointness(g, g, jobs); }

SpectrumTable spectrum(int n, int k, int q) {
  require_prime_power(q);
  if (k < 0 || n < 2 * k) throw std::invalid_argument("spectrum requires 0 <= k and n >= 2k");
  SpectrumTable t;
  t.n = n;
  t.k = k;
  t.q = q;
  t.scale = ipow(q, static_cast<unsigned long>(k) * k);
  t.report = Report("spectrum_formula", json{{"n", n}, {"k", k}, {"q", q}});
  for (int i = 0; i <= k; ++i) {
    SpectrumEntry e;
    e.i = i;
    e.lambda = Rational(sign_pow(i)) * qpow(q, choose2(i) - static_cast<long>(k) * i) *
               Rational(gauss_binom(n - k - i, k - i, q));
    e.lambda.canonicalize();
    Rational mu = e.lambda * Rational(t.scale);
    mu.canonicalize();
    if (mu.get_den() != 1) t.report.fail("q^{k^2} lambda_i is not an integer", json{{"i", i}});
    e.mu = mu.get_num();
    e.multiplicity = gauss_binom(n, i, q) - gauss_binom(n, i - 1, q);
    t.entries.push_back(e);
  }
  for (int i = 0; i <= k && t.distinct; ++i)
    for (int j = i + 1; j <= k; ++j)
      if (t.entries[i].lambda == t.entries[j].lambda) {
        t.distinct = false;
        t.report.fail("eigenvalue collision", json{{"i", i}, {"j", j}});
        break;
      }
  Integer msum = 0;
  Rational trace = 0;
  json lambdas = json::array(), mults = json::array(), mus = json::array();
  for (const auto& e : t.entries) {
    msum += e.multiplicity;
    trace += Rational(e.multiplicity) * e.lambda;
    lambdas.push_back(to_string(e.lambda));
    mults.push_back(to_string(e.multiplicity));
    mus.push_back(to_string(e.mu));
  }
  t.report.values["lambda"] = lambdas;
  t.report.values["mu"] = mus;
  t.report.values["multiplicity"] = mults;
  t.report.values["multiplicity_sum"] = to_string(msum);
  t.report.values["trace"] = to_string(trace);
  if (msum != gauss_binom(n, k, q)) t.report.fail_residual("multiplicities do not sum to [n, k]");
  if (sgn(trace) != 0) t.report.fail_residual("sum m_i lambda_i is not zero");
  return t;
}

std::vector<Integer> lagrange_numerator(const SpectrumTable& spec, int i) {
  std::vector<Integer> poly{1};
  for (const auto& e : spec.entries) {
    if (e.i == i) continue;
    std::vector<Integer> next(poly.size() + 1);
    for (std::size_t t = 0; t < poly.size(); ++t) {
      next[t + 1] += poly[t];
      next[t] -= e.mu * poly[t];
    }
    poly = std::move(next);
  }
  return poly;
}

Integer lagrange_denominator(const SpectrumTable& spec, int i) {
  Integer d = 1;
  for (const auto& e : spec.entries)
    if (e.i != i) d *= spec.entries.at(i).mu - e.mu;
  return d;
}

ProjectorSet eigenprojectors(const IntMatrix& m, const SpectrumTable& spec, int jobs) {
  if (!spec.distinct) throw std::invalid_argument("eigenprojectors: eigenvalues are not distinct");
  if (!(m.row_space() == m.col_space())) throw IndexSpaceMismatch("eigenprojectors: M is not square");
  ProjectorSet out;
  out.spectrum = spec;
  out.report = Report("eigenprojectors", json{{"n", spec.n}, {"k", spec.k}, {"q", spec.q}});
  ReportTimer timer(out.report);
  const IndexSpace sp = m.row_space();
  const std::size_t parts = spec.entries.size();

  std::vector<IntMatrix> powers{IntMatrix::identity(sp), m};
  while (powers.size() < parts) powers.push_back(multiply(powers.back(), m, jobs));
  powers.resize(parts);

  for (std::size_t i = 0; i < parts; ++i) {
    auto coeff = lagrange_numerator(spec, static_cast<int>(i));
    IntMatrix num(sp, sp);
    for (std::size_t t = 0; t < coeff.size(); ++t) num.add_scaled(coeff[t], powers[t]);
    out.numerators.push_back(std::move(num));
    out.denominators.push_back(lagrange_denominator(spec, static_cast<int>(i)));
  }
  powers.clear();

  auto& rep = out.report;
  json traces = json::array();
  for (std::size_t i = 0; i < parts; ++i) {
    const IntMatrix& ni = out.numerators[i];
    const Integer& di = out.denominators[i];
    if (!ni.is_symmetric()) rep.fail_residual("projector is not symmetric", json{{"i", i}});
    Integer tr = ni.trace();
    Rational ptrace(tr, di);
    ptrace.canonicalize();
    traces.push_back(to_string(ptrace));
    if (tr != spec.entries[i].multiplicity * di)
      rep.fail_residual("trace of projector differs from the multiplicity",
                        json{{"i", i}, {"trace", to_string(ptrace)},
                             {"multiplicity", to_string(spec.entries[i].multiplicity)}});
    for (std::size_t j = i; j < parts; ++j) {
      IntMatrix prod = multiply(ni, out.numerators[j], jobs);
      if (i == j) {
        IntMatrix rhs = ni;
        rhs *= di;
        if (auto w = first_mismatch(prod, rhs)) {
          json wj = w->to_json();
          wj["i"] = i;
          rep.fail_residual("projector is not idempotent", wj);
        }
      } else if (!prod.is_zero()) {
        auto w = first_mismatch(prod, IntMatrix(sp, sp));
        json wj = w->to_json();
        wj["i"] = i;
        wj["j"] = j;
        rep.fail_residual("projectors are not mutually orthogonal", wj);
      }
    }
  }
  rep.values["traces"] = traces;

  Integer l = 1;
  for (const auto& d : out.denominators) l = lcm(l, abs(d));
  IntMatrix resolution(sp, sp), reconstruction(sp, sp);
  for (std::size_t i = 0; i < parts; ++i) {
    Integer w = l / out.denominators[i];
    resolution.add_scaled(w, out.numerators[i]);
    reconstruction.add_scaled(w * spec.entries[i].mu, out.numerators[i]);
  }
  IntMatrix target = IntMatrix::identity(sp);
  target *= l;
  if (auto w = first_mismatch(resolution, target))
    rep.fail_residual("projectors do not sum to the identity", w->to_json());
  IntMatrix scaled_m = m;
  scaled_m *= l;
  if (auto w = first_mismatch(reconstruction, scaled_m))
    rep.fail_residual("sum mu_i P_i differs from M", w->to_json());

  IntMatrix p0 = out.numerators[0];
  p0 *= size_of(sp.size);
  IntMatrix j0 = IntMatrix::ones(sp, sp);
  j0 *= out.denominators[0];
  if (auto w = first_mismatch(p0, j0)) rep.fail_residual("P_0 differs from J/[n, k]", w->to_json());
  return out;
}

KneserOperator::KneserOperator(const GrassmannIndex& g, int jobs)
    : size_(g.size()), words_((g.size() + 63) / 64), bits_(size_ * words_, 0) {
  const bool fast = g.has_point_sets();
  parallel_for(size_, jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      for (std::size_t c = 0; c < size_; ++c) {
        bool disjoint = fast ? g.points(r).count_common(g.points(c)) == 1
                             : meet_dim(g.field(), g[r], g[c]) == 0;
        if (disjoint) bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
      }
  });
}

std::size_t KneserOperator::degree(std::size_t r) const {
  std::size_t d = 0;
  for (std::size_t w = 0; w < words_; ++w) d += std::popcount(bits_[r * words_ + w]);
  return d;
}

IntVector KneserOperator::apply(std::span<const Integer> v, int jobs) const {
  if (v.size() != size_) throw IndexSpaceMismatch("Kneser operator: length mismatch");
  std::size_t vbits = 0, maxdeg = 0;
  for (const auto& x : v) vbits = std::max(vbits, bit_length(x));
  for (std::size_t r = 0; r < size_; ++r) maxdeg = std::max(maxdeg, degree(r));
  IntVector out(size_);
  const bool small = vbits + static_cast<std::size_t>(std::bit_width(maxdeg)) <= 62;
  std::vector<std::int64_t> sv;
  if (small) {
    sv.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) sv[i] = mpz_get_si(v[i].get_mpz_t());
  }
  parallel_for(size_, jobs, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      std::int64_t acc = 0;
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t word = bits_[r * words_ + w];
        while (word) {
          std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(word));
          word &= word - 1;
          if (small)
            acc += sv[c];
          else
            out[r] += v[c];
        }
      }
      if (small) mpz_set_si(out[r].get_mpz_t(), acc);
    }
  });
  return out;
}

Projection project(std::span<const Rational> h, const ProjectorSet& p) {
  if (h.size() != p.numerators.front().cols()) throw IndexSpaceMismatch("project: length mismatch");
  Integer den = common_denominator(h);
  IntVector x = scale_to_integers(h, den);
  std::vector<IntVector> y;
  for (const auto& ni : p.numerators) y.push_back(qekr::apply(ni, x));
  const auto& s = p.spectrum;
  return assemble(h, x, den, std::move(y), p.denominators,
                  json{{"n", s.n}, {"k", s.k}, {"q", s.q}, {"route", "dense"}});
}

Projection project(std::span<const Rational> h, const KneserOperator& m, const SpectrumTable& spec,
                   int jobs) {
  if (!spec.distinct) throw std::invalid_argument("project: eigenvalues are not distinct");
  if (h.size() != m.size()) throw IndexSpaceMismatch("project: length mismatch");
  Integer den = common_denominator(h);
  IntVector x = scale_to_integers(h, den);
  const std::size_t parts = spec.entries.size();
  std::vector<IntVector> krylov{x};
  while (krylov.size() < parts) krylov.push_back(m.apply(krylov.back(), jobs));
  std::vector<IntVector> y;
  std::vector<Integer> d;
  for (std::size_t i = 0; i < parts; ++i) {
    auto coeff = lagrange_numerator(spec, static_cast<int>(i));
    IntVector yi(x.size());
    for (std::size_t t = 0; t < coeff.size(); ++t)
      if (sgn(coeff[t]) != 0)
        for (std::size_t c = 0; c < x.size(); ++c)
          mpz_addmul(yi[c].get_mpz_t(), coeff[t].get_mpz_t(), krylov[t][c].get_mpz_t());
    y.push_back(std::move(yi));
    d.push_back(lagrange_denominator(spec, static_cast<int>(i)));
  }
  return assemble(h, x, den, std::move(y), d,
                  json{{"n", spec.n}, {"k", spec.k}, {"q", spec.q}, {"route", "operator"}});
}

Workspace::Workspace(int n, int k, int q, WorkspaceOptions options)
    : n_(n), k_(k), options_(std::move(options)),
      ambient_(n, make_field(q), options_.cap, options_.loader) {
  if (k < 0 || k > n) throw std::invalid_argument("Workspace: requires 0 <= k <= n");
}

const Incidence& Workspace::incidence(int i, int j) const {
  std::lock_guard lock(mutex_);
  auto& slot = incidence_[{i, j}];
  if (!slot) slot = std::make_shared<const Incidence>(build_incidence(grassmannian(i), grassmannian(j)));
  return *slot;
}

const Incidence& Workspace::disjointness(int i, int j) const {
  std::lock_guard lock(mutex_);
  auto& slot = disjoint_[{i, j}];
  if (!slot)
    slot = std::make_shared<const Incidence>(
        build_disjointness(grassmannian(i), grassmannian(j), options_.jobs));
  return *slot;
}

const SpectrumTable& Workspace::spectrum() const {
  std::lock_guard lock(mutex_);
  if (!spectrum_) spectrum_ = std::make_shared<const SpectrumTable>(qekr::spectrum(n_, k_, q()));
  return *spectrum_;
}

bool Workspace::dense_feasible() const {
  return gauss_binom(n_, k_, q()) <= size_of(options_.dense_budget);
}

const ProjectorSet& Workspace::projectors() const {
  std::lock_guard lock(mutex_);
  if (!projectors_) {
    if (!dense_feasible())
      throw BudgetExceeded("[n, k] = " + to_string(gauss_binom(n_, k_, q())) +
                           " exceeds the dense budget " + std::to_string(options_.dense_budget));
    projectors_ = std::make_shared<const ProjectorSet>(
        eigenprojectors(adjacency().to_dense(), spectrum(), options_.jobs));
  }
  return *projectors_;
}

const KneserOperator& Workspace::kneser() const {
  std::lock_guard lock(mutex_);
  if (!kneser_) kneser_ = std::make_shared<const KneserOperator>(grassmannian(k_), options_.jobs);
  return *kneser_;
}

Projection Workspace::project(std::span<const Rational> h) const {
  if (dense_feasible()) return qekr::project(h, projectors());
  return qekr::project(h, kneser(), spectrum(), options_.jobs);
}

const Report* Workspace::memo(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = memo_.find(key);
  return it == memo_.end() ? nullptr : &it->second;
}

void Workspace::remember(const std::string& key, Report r) const {
  std::lock_guard lock(mutex_);
  memo_.insert_or_assign(key, std::move(r));
}

}  // namespace qekr
