#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace qekr {

using Element = std::uint8_t;

class UnsupportedField : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Finite field F_q for q in {2,3,4,5,7,8,9}, fully tabulated.
///
/// Element encoding: an integer a in [0, q) stands for the polynomial
/// sum_i c_i x^i over F_p where a = sum_i c_i p^i (base-p digits, least
/// significant first). For prime q this is the residue itself. Extension
/// fields use the fixed moduli
///   GF(4): x^2 + x + 1,   GF(8): x^3 + x + 1,   GF(9): x^2 + 1.
/// This encoding is part of the family and cache file formats.
class FiniteField {
 public:
  static constexpr int kMaxOrder = 9;

  /// Builds and validates the field; throws UnsupportedField for q outside the
  /// desk-scale set and for non prime powers.
  static FiniteField make(int q);

  int q() const { return q_; }
  int characteristic() const { return p_; }
  int degree() const { return e_; }
  /// Coefficients of the monic modulus below the leading 1, constant term first.
  /// x^2 + x + 1 is {1, 1}. Empty for prime fields.
  const std::vector<int>& modulus() const { return modulus_; }

  bool valid(int a) const { return a >= 0 && a < q_; }

  Element add(Element a, Element b) const { return add_[a][b]; }
  Element sub(Element a, Element b) const { return add_[a][neg_[b]]; }
  Element mul(Element a, Element b) const { return mul_[a][b]; }
  Element neg(Element a) const { return neg_[a]; }
  /// Throws std::domain_error for a == 0.
  Element inv(Element a) const;
  Element pow(Element a, unsigned e) const;

  /// Polynomial form of an element, e.g. "x+1".
  std::string describe(Element a) const;

 private:
  FiniteField() = default;

  int q_ = 0, p_ = 0, e_ = 0;
  std::vector<int> modulus_;
  std::array<std::array<Element, kMaxOrder>, kMaxOrder> add_{};
  std::array<std::array<Element, kMaxOrder>, kMaxOrder> mul_{};
  std::array<Element, kMaxOrder> neg_{};
  std::array<Element, kMaxOrder> inv_{};
};

std::shared_ptr<const FiniteField> make_field(int q);

}  // namespace qekr
