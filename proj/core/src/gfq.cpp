#include "qekr/gfq.hpp"

#include "qekr/qarith.hpp"

namespace qekr {

namespace {

std::vector<int> digits(int a, int p, int e) {
  std::vector<int> d(e);
  for (int i = 0; i < e; ++i) {
    d[i] = a % p;
    a /= p;
  }
  return d;
}

int from_digits(const std::vector<int>& d, int p) {
  int a = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) a = a * p + d[i];
  return a;
}

// Product of two polynomials of degree < e reduced modulo a monic modulus of degree e.
std::vector<int> poly_mulmod(const std::vector<int>& a, const std::vector<int>& b,
                             const std::vector<int>& modulus, int p) {
  const int e = static_cast<int>(a.size());
  std::vector<int> prod(2 * e - 1, 0);
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
  for (int t = 2 * e - 2; t >= e; --t) {
    int c = prod[t];
    if (c == 0) continue;
    // x^e = -(m_0 + ... + m_{e-1} x^{e-1})
    for (int i = 0; i < e; ++i) prod[t - e + i] = ((prod[t - e + i] - c * modulus[i]) % p + p) % p;
    prod[t] = 0;
  }
  prod.resize(e);
  return prod;
}

bool has_root(const std::vector<int>& modulus, int p) {
  const int e = static_cast<int>(modulus.size());
  for (int x = 0; x < p; ++x) {
    int acc = 1;  // leading coefficient
    for (int i = e - 1; i >= 0; --i) acc = (acc * x + modulus[i]) % p;
    if (acc == 0) return true;
  }
  return false;
}

}  // namespace

FiniteField FiniteField::make(int q) {
  long p = 0;
  int e = 0;
  if (!is_prime_power(q, &p, &e)) throw UnsupportedField("q = " + std::to_string(q) + " is not a prime power");
  if (q > kMaxOrder)
    throw UnsupportedField("q = " + std::to_string(q) + " exceeds the desk-scale cap of " +
                           std::to_string(kMaxOrder));
  FiniteField f;
  f.q_ = q;
  f.p_ = static_cast<int>(p);
  f.e_ = e;
  if (e == 2 && p == 2) f.modulus_ = {1, 1};
  if (e == 3 && p == 2) f.modulus_ = {1, 1, 0};
  if (e == 2 && p == 3) f.modulus_ = {1, 0};
  if (e > 1) {
    // degree 2 and 3 polynomials are irreducible iff they have no root
    if (has_root(f.modulus_, f.p_)) throw std::logic_error("field modulus is reducible");
  }

  for (int a = 0; a < q; ++a) {
    auto da = digits(a, f.p_, e);
    for (int b = 0; b < q; ++b) {
      auto db = digits(b, f.p_, e);
      std::vector<int> sum(e);
      for (int i = 0; i < e; ++i) sum[i] = (da[i] + db[i]) % f.p_;
      f.add_[a][b] = static_cast<Element>(from_digits(sum, f.p_));
      if (e == 1)
        f.mul_[a][b] = static_cast<Element>((a * b) % f.p_);
      else
        f.mul_[a][b] = static_cast<Element>(from_digits(poly_mulmod(da, db, f.modulus_, f.p_), f.p_));
    }
  }
  for (int a = 0; a < q; ++a) {
    int neg_count = 0, inv_count = 0;
    for (int b = 0; b < q; ++b) {
      if (f.add_[a][b] == 0) {
        f.neg_[a] = static_cast<Element>(b);
        ++neg_count;
      }
      if (f.mul_[a][b] == 1) {
        f.inv_[a] = static_cast<Element>(b);
        ++inv_count;
      }
    }
    if (neg_count != 1 || inv_count != (a == 0 ? 0 : 1))
      throw std::logic_error("field tables: missing or non-unique inverse");
  }
  // exhaustive axioms (q^3 <= 729 triples)
  for (int a = 0; a < q; ++a)
    for (int b = 0; b < q; ++b) {
      if (f.add_[a][b] != f.add_[b][a] || f.mul_[a][b] != f.mul_[b][a])
        throw std::logic_error("field tables: not commutative");
      for (int c = 0; c < q; ++c) {
        if (f.add_[f.add_[a][b]][c] != f.add_[a][f.add_[b][c]] ||
            f.mul_[f.mul_[a][b]][c] != f.mul_[a][f.mul_[b][c]])
          throw std::logic_error("field tables: not associative");
        if (f.mul_[a][f.add_[b][c]] != f.add_[f.mul_[a][b]][f.mul_[a][c]])
          throw std::logic_error("field tables: not distributive");
      }
    }
  return f;
}

Element FiniteField::inv(Element a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  return inv_[a];
}

Element FiniteField::pow(Element a, unsigned e) const {
  Element r = 1;
  for (unsigned i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

std::string FiniteField::describe(Element a) const {
  if (e_ == 1) return std::to_string(a);
  auto d = digits(a, p_, e_);
  std::string out;
  for (int i = e_ - 1; i >= 0; --i) {
    if (d[i] == 0) continue;
    if (!out.empty()) out += "+";
    if (i == 0 || d[i] != 1) out += std::to_string(d[i]);
    if (i >= 1) out += "x";
    if (i >= 2) out += "^" + std::to_string(i);
  }
  return out.empty() ? "0" : out;
}

std::shared_ptr<const FiniteField> make_field(int q) {
  return std::make_shared<const FiniteField>(FiniteField::make(q));
}

}  // namespace qekr
